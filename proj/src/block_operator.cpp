#include "tlj/block_operator.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace tlj {

std::vector<GradingTuple> grading_tuples(const FundamentalSolution& s, const GammaPath& p) {
    const BiGraph& g = *s.base;
    std::vector<GradingTuple> tuples;
    auto starts = s.gradings.sets.find(domain_vertex(g, p));
    if (starts == s.gradings.sets.end()) return tuples;
    for (const auto& v0 : starts->second) tuples.push_back({v0});
    for (const auto& edge_id : p.edges) {
        const GammaEdge& e = g.edge(edge_id);
        std::vector<GradingTuple> extended;
        for (const auto& t : tuples)
            for (const auto& w : s.gradings.sets.at(e.target))
                if (s.dim(e.id, t.back(), w) > 0) {
                    GradingTuple longer = t;
                    longer.push_back(w);
                    extended.push_back(std::move(longer));
                }
        tuples = std::move(extended);
    }
    return tuples;
}

int tuple_dim(const FundamentalSolution& s, const GammaPath& p, const GradingTuple& t) {
    int dim = 1;
    for (std::size_t i = 0; i < p.edges.size(); ++i)
        dim *= s.dim(p.edges[i], t[i], t[i + 1]);
    return dim;
}

BlockOperator identity_operator(const FundamentalSolution& s, const GammaPath& p) {
    BlockOperator op;
    op.domain = p;
    op.codomain = p;
    for (const auto& t : grading_tuples(s, p)) {
        int d = tuple_dim(s, p, t);
        op.blocks[{t, t}] = Matrix::Identity(d, d);
    }
    return op;
}

namespace {

// Column vector of the cup block: entry i*dim_ebar + j carries c(i, j), the
// leftmost tensor factor most significant.
Matrix cup_vector(const Matrix& cup) {
    Matrix k(cup.rows() * cup.cols(), 1);
    for (Eigen::Index i = 0; i < cup.rows(); ++i)
        for (Eigen::Index j = 0; j < cup.cols(); ++j) k(i * cup.cols() + j, 0) = cup(i, j);
    return k;
}

int partial_dim(const FundamentalSolution& s, const GammaPath& p, const GradingTuple& t,
                std::size_t begin, std::size_t end) {
    int dim = 1;
    for (std::size_t i = begin; i < end; ++i) dim *= s.dim(p.edges[i], t[i], t[i + 1]);
    return dim;
}

} // namespace

BlockOperator evaluate_slice(const FundamentalSolution& s, const ElementarySlice& slice) {
    const BiGraph& g = *s.base;
    switch (slice.kind) {
    case ElementarySlice::Kind::Identity:
        return identity_operator(s, slice.bottom);

    case ElementarySlice::Kind::Cup: {
        BlockOperator op;
        op.domain = slice.bottom;
        op.codomain = slice.top;
        const GammaEdge& e = g.edge(slice.edge);
        const std::size_t p = static_cast<std::size_t>(slice.position);
        for (const auto& t : grading_tuples(s, slice.bottom)) {
            const int pre = partial_dim(s, slice.bottom, t, 0, p);
            const int post = partial_dim(s, slice.bottom, t, p, slice.bottom.size());
            for (const auto& w : s.gradings.sets.at(e.target)) {
                const Matrix* cup = s.find_cup(BlockKey{e.id, t[p], w});
                if (!cup) continue;
                GradingTuple u;
                u.insert(u.end(), t.begin(), t.begin() + static_cast<long>(p) + 1);
                u.push_back(w);
                u.push_back(t[p]);
                u.insert(u.end(), t.begin() + static_cast<long>(p) + 1, t.end());
                op.blocks[{t, u}] = kron_identity(pre, cup_vector(*cup), post);
            }
        }
        return op;
    }

    case ElementarySlice::Kind::Cap: {
        BlockOperator op;
        op.domain = slice.bottom;
        op.codomain = slice.top;
        const GammaEdge& e = g.edge(slice.edge);
        const std::size_t p = static_cast<std::size_t>(slice.position);
        for (const auto& t : grading_tuples(s, slice.bottom)) {
            if (t[p + 2] != t[p]) continue; // the cap only hits the diagonal
            const Matrix* cup = s.find_cup(BlockKey{e.id, t[p], t[p + 1]});
            if (!cup) continue;
            const int pre = partial_dim(s, slice.bottom, t, 0, p);
            const int post = partial_dim(s, slice.bottom, t, p + 2, slice.bottom.size());
            GradingTuple u = t;
            u.erase(u.begin() + static_cast<long>(p) + 1, u.begin() + static_cast<long>(p) + 3);
            Matrix cap_row = cup_vector(*cup).adjoint();
            Matrix m = kron_identity(pre, cap_row, post);
            auto [it, fresh] = op.blocks.emplace(std::make_pair(t, u), m);
            if (!fresh) it->second += m;
        }
        return op;
    }
    }
    throw std::logic_error("evaluate_slice: unreachable");
}

BlockOperator multiply(const BlockOperator& after, const BlockOperator& before) {
    if (after.domain != before.codomain)
        throw std::invalid_argument("multiply: inner paths do not match");
    std::map<GradingTuple, std::vector<const std::pair<const std::pair<GradingTuple, GradingTuple>,
                                                       Matrix>*>>
        by_domain;
    for (const auto& entry : after.blocks) by_domain[entry.first.first].push_back(&entry);

    BlockOperator out;
    out.domain = before.domain;
    out.codomain = after.codomain;
    for (const auto& [key, mat] : before.blocks) {
        auto it = by_domain.find(key.second);
        if (it == by_domain.end()) continue;
        for (const auto* entry : it->second) {
            Matrix product = entry->second * mat;
            auto [slot, fresh] =
                out.blocks.emplace(std::make_pair(key.first, entry->first.second), product);
            if (!fresh) slot->second += product;
        }
    }
    return out;
}

BlockOperator tensor_product(const FundamentalSolution& s, const BlockOperator& f,
                             const BlockOperator& g) {
    const BiGraph& base = *s.base;
    if (codomain_vertex(base, f.domain) != domain_vertex(base, g.domain) ||
        codomain_vertex(base, f.codomain) != domain_vertex(base, g.codomain))
        throw std::invalid_argument("tensor_product: vertex mismatch");

    auto concat_path = [](const GammaPath& l, const GammaPath& r) {
        GammaPath p;
        p.edges = l.edges;
        p.edges.insert(p.edges.end(), r.edges.begin(), r.edges.end());
        p.at = l.empty() ? r.at : l.at;
        return p;
    };
    auto concat_tuple = [](const GradingTuple& l, const GradingTuple& r) {
        GradingTuple t = l;
        t.insert(t.end(), r.begin() + 1, r.end());
        return t;
    };
    auto kron = [](const Matrix& a, const Matrix& b) {
        Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };

    BlockOperator out;
    out.domain = concat_path(f.domain, g.domain);
    out.codomain = concat_path(f.codomain, g.codomain);
    for (const auto& [fk, fm] : f.blocks)
        for (const auto& [gk, gm] : g.blocks) {
            if (fk.first.back() != gk.first.front() || fk.second.back() != gk.second.front())
                continue;
            out.blocks[{concat_tuple(fk.first, gk.first), concat_tuple(fk.second, gk.second)}] =
                kron(fm, gm);
        }
    return out;
}

BlockOperator scale_operator(const BlockOperator& op, Complex c) {
    BlockOperator out;
    out.domain = op.domain;
    out.codomain = op.codomain;
    if (c == Complex(0.0, 0.0)) return out;
    for (const auto& [key, mat] : op.blocks) out.blocks[key] = mat * c;
    return out;
}

BlockOperator add_operators(const BlockOperator& a, const BlockOperator& b) {
    if (a.domain != b.domain || a.codomain != b.codomain)
        throw std::invalid_argument("add_operators: boundary mismatch");
    BlockOperator out = a;
    for (const auto& [key, mat] : b.blocks) {
        auto [it, fresh] = out.blocks.emplace(key, mat);
        if (!fresh) it->second += mat;
    }
    return out;
}

BlockOperator adjoint_operator(const BlockOperator& op) {
    BlockOperator out;
    out.domain = op.codomain;
    out.codomain = op.domain;
    for (const auto& [key, mat] : op.blocks)
        out.blocks[{key.second, key.first}] = mat.adjoint();
    return out;
}

double block_distance(const BlockOperator& a, const BlockOperator& b) {
    double worst = 0.0;
    auto scan = [&](const BlockOperator& x, const BlockOperator& y) {
        for (const auto& [key, mat] : x.blocks) {
            auto it = y.blocks.find(key);
            double local;
            if (it == y.blocks.end())
                local = mat.size() == 0 ? 0.0 : mat.cwiseAbs().maxCoeff();
            else
                local = (mat - it->second).cwiseAbs().maxCoeff();
            worst = std::max(worst, local);
        }
    };
    scan(a, b);
    scan(b, a);
    return worst;
}

BlockOperator evaluate_functor(const FundamentalSolution& s, const Morphism2& m) {
    if (!m.base || !s.base || (m.base != s.base && !same_gamma(*m.base, *s.base)))
        throw std::invalid_argument("evaluate_functor: solution and morphism base graphs differ");
    if (!validate_solution(s).ok())
        throw std::invalid_argument("evaluate_functor: solution is not well-formed");
    const BiGraph& g = *s.base;

    BlockOperator total;
    total.domain = m.bottom;
    total.codomain = m.top;
    for (const auto& [diagram, coeff] : m.terms) {
        std::vector<ElementarySlice> slices = decompose_to_slices(g, diagram);
        BlockOperator op = evaluate_slice(s, slices.front());
        for (std::size_t k = 1; k < slices.size(); ++k)
            op = multiply(evaluate_slice(s, slices[k]), op);
        total = add_operators(total, scale_operator(op, coeff));
    }
    return total;
}

} // namespace tlj
