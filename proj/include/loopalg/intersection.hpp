#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopalg/ring.hpp"

namespace loopalg {

/// Solution of the lifting system for a cycle alpha of T(W):
///   d(alpha_m) + sum_j beta_m^j alpha_j + sum a_m^{jk} (-1)^{|alpha||w_k|} alpha_j w_k
///             + sum a_m^{kj} (-1)^{|w_k|} w_k alpha_j = [w_m, alpha],
/// equivalently the e_m components of D(1 (x) alpha + sum e_i (x) alpha_i) = 0.
struct LiftWitness {
    bool found = false;
    WordChain alpha;
    std::vector<WordChain> alphas;  // indexed by generator; present iff found
};

namespace detail {

/// Left-hand side of the lifting system for candidate alphas, minus the
/// right-hand side; zero for every m iff the candidate is a witness.
inline std::vector<WordChain> lift_residual(const CobarAlgebra& c, const WordChain& alpha,
                                            const std::vector<WordChain>& alphas) {
    const int adeg = chain_degree(c, alpha);
    std::vector<WordChain> out(c.size());
    auto gen = [&](std::size_t i) { return WordChain{{Word(1, as_letter(i)), Scalar::from_int(c.field, 1)}}; };
    for (std::size_t m = 0; m < c.size(); ++m) {
        WordChain r = cobar_differential(c, alphas[m]);
        for (const auto& [j, b] : c.beta[m])
            for (const auto& [w, v] : alphas[j]) accumulate(r, w, v * b);
        for (const auto& [j, k, a] : c.quadratic[m]) {
            Scalar s1 = a * Scalar::from_int(c.field, sign_of(static_cast<long>(adeg) * c.degree(k)));
            for (const auto& [w, v] : word_product(alphas[j], gen(k))) accumulate(r, w, v * s1);
            // a_m^{kj} term: here the pair is (j, k) = (first, second), so the unknown is the second letter.
            Scalar s2 = a * Scalar::from_int(c.field, sign_of(c.degree(j)));
            for (const auto& [w, v] : word_product(gen(j), alphas[k])) accumulate(r, w, v * s2);
        }
        for (const auto& [w, v] : commutator(c, gen(m), alpha)) accumulate(r, w, -v);
        out[m] = std::move(r);
    }
    return out;
}

}  // namespace detail

/// Solves the lifting system for a homogeneous cycle alpha exactly. The
/// unknown alpha_m lives in degree |alpha| + |w_m| + 1; when d has no linear
/// part the system splits by word length.
template <class F>
LiftWitness lift_witness(const CobarAlgebra& c, const WordChain& alpha, const F& field) {
    using V = typename F::value_type;
    if (!cobar_differential(c, alpha).empty()) throw NotACycle("lift_witness needs a cycle of T(W)");
    LiftWitness out;
    out.alpha = alpha;
    out.alphas.assign(c.size(), WordChain{});
    if (alpha.empty()) {
        out.found = true;
        return out;
    }
    const int adeg = chain_degree(c, alpha);
    for (const auto& [w, v] : alpha)
        if (c.degree(w) != adeg) throw ShapeError("lift_witness needs a homogeneous chain");
    TypedCobar<F> tc(field, c);
    const bool split = !c.has_linear_part();
    std::map<int, WordChain> parts;
    for (const auto& [w, v] : alpha) parts[split ? static_cast<int>(w.size()) : -1][w] = v;

    for (const auto& [len, component] : parts) {
        const int ulen = len;                      // unknowns keep the length of alpha
        const int rlen = split ? len + 1 : -1;     // equations live one length up
        std::vector<std::vector<Word>> unknowns(c.size()), rows(c.size());
        std::vector<std::size_t> col_off(c.size() + 1, 0), row_off(c.size() + 1, 0);
        std::vector<std::unordered_map<Word, Index>> row_index(c.size());
        for (std::size_t m = 0; m < c.size(); ++m) {
            unknowns[m] = enumerate_words(tc.degree, adeg + c.degree(m) + 1, ulen);
            rows[m] = enumerate_words(tc.degree, adeg + c.degree(m), rlen);
            for (std::size_t r = 0; r < rows[m].size(); ++r) row_index[m].emplace(rows[m][r], static_cast<Index>(r));
            col_off[m + 1] = col_off[m] + unknowns[m].size();
            row_off[m + 1] = row_off[m] + rows[m].size();
        }
        auto row_of = [&](std::size_t m, const Word& w) -> Index {
            auto it = row_index[m].find(w);
            if (it == row_index[m].end()) throw InternalError("lifting equation leaves its degree");
            return static_cast<Index>(row_off[m] + it->second);
        };
        // Equations using unknown alpha_j: beta_m^j and a_m^{jk}, a_m^{kj}.
        std::vector<std::vector<std::pair<std::size_t, V>>> beta_by_j(c.size());
        std::vector<std::vector<std::tuple<std::size_t, std::size_t, V, bool>>> quad_by_j(c.size());
        for (std::size_t m = 0; m < c.size(); ++m) {
            for (const auto& [j, b] : c.beta[m]) beta_by_j[j].push_back({m, b.to(field)});
            for (const auto& [j, k, a] : c.quadratic[m]) {
                V s1 = field.mul(a.to(field), field.from_int(sign_of(static_cast<long>(adeg) * c.degree(k))));
                quad_by_j[j].push_back({m, k, s1, true});  // alpha_j w_k
                V s2 = field.mul(a.to(field), field.from_int(sign_of(c.degree(j))));
                quad_by_j[k].push_back({m, j, s2, false});  // w_j alpha_k
            }
        }
        SparseMatrix<F> mat(row_off.back(), col_off.back());
        for (std::size_t j = 0; j < c.size(); ++j)
            for (std::size_t u = 0; u < unknowns[j].size(); ++u) {
                const Word& w = unknowns[j][u];
                std::vector<std::pair<Index, V>> pairs;
                std::vector<std::pair<Word, V>> dw;
                tc.differential(w, field.one(), dw);
                for (const auto& [t, v] : dw) pairs.push_back({row_of(j, t), v});
                for (const auto& [m, b] : beta_by_j[j]) pairs.push_back({row_of(m, w), b});
                for (const auto& [m, k, s, on_right] : quad_by_j[j]) {
                    Word t = on_right ? w + as_letter(k) : as_letter(k) + w;
                    pairs.push_back({row_of(m, t), s});
                }
                mat.columns[col_off[j] + u] = SparseVector<F>::from_pairs(field, std::move(pairs));
            }
        std::vector<std::pair<Index, V>> rhs;
        for (std::size_t m = 0; m < c.size(); ++m)
            for (const auto& [t, v] : commutator(c, WordChain{{Word(1, as_letter(m)), Scalar::from_int(c.field, 1)}}, component))
                rhs.push_back({row_of(m, t), v.to(field)});
        auto x = solve_linear(field, mat, SparseVector<F>::from_pairs(field, std::move(rhs)));
        if (!x) {
            out.found = false;
            out.alphas.assign(c.size(), WordChain{});
            return out;
        }
        for (const auto& t : x->terms) {
            std::size_t j = static_cast<std::size_t>(std::upper_bound(col_off.begin(), col_off.end(), t.index) - col_off.begin()) - 1;
            accumulate(out.alphas[j], unknowns[j][t.index - col_off[j]], Scalar::from_value(field, t.value));
        }
    }
    for (const auto& r : detail::lift_residual(c, alpha, out.alphas))
        if (!r.empty()) throw InternalError("lift witness fails substitution");
    out.found = true;
    return out;
}

inline LiftWitness lift_witness(const CobarAlgebra& c, const WordChain& alpha) {
    return visit_field(c.field, [&](auto field) { return lift_witness(c, alpha, field); });
}

struct NilpotencyRecord {
    int bound = 0;             // floor(d / 2)
    int observed = 0;          // largest m with a nonzero in-window product of m kernel classes
    bool respected = true;
    std::size_t unobserved = 0;  // products leaving the window or without structure constants
    bool complete = true;        // false when products were not available
};

struct CentralityRecord {
    std::size_t checked = 0;
    std::size_t unobserved = 0;
    std::vector<std::string> violations;
};

struct IntersectionReport {
    std::string algebra;
    FieldSpec field;
    int formal_dimension = 0;
    int min_degree = 0;
    int max_degree = 0;
    std::map<int, std::size_t> loop_dim, omega_dim, rank;
    // Sparse matrix of I per degree: (omega class, loop class, value), global class indices.
    std::map<int, std::vector<std::tuple<std::size_t, std::size_t, Scalar>>> matrix;
    // Kernel vectors in loop-class coordinates, image vectors in omega-class coordinates.
    std::map<int, std::vector<std::vector<std::pair<std::size_t, Scalar>>>> kernel_basis, image_basis;
    bool chain_map_ok = false;
    std::size_t multiplicativity_checked = 0;
    std::vector<std::string> multiplicativity_failures;
    NilpotencyRecord nilpotency;
    CentralityRecord centrality;
    std::size_t lift_checks = 0;
    std::vector<std::string> lift_disagreements;
    std::map<int, bool> surjective;

    bool surjective_throughout() const {
        for (const auto& [n, s] : surjective)
            if (!s) return false;
        return true;
    }
    bool theorem_violation() const {
        return !chain_map_ok || !multiplicativity_failures.empty() || !nilpotency.respected ||
               !centrality.violations.empty() || !lift_disagreements.empty();
    }
};

/// Checks that eps (x) 1 : A (x) T(W) -> T(W) commutes with the differentials
/// on every cell of the reported slices; returns the number of cells checked.
template <class F>
std::size_t intersection_chain_map(HochschildWindow<F>& lm, OmegaWindow<F>& om) {
    const auto& f = lm.field();
    std::size_t checked = 0;
    for (int n = std::max(lm.min_degree(), 0); n < std::min(lm.max_degree(), om.max_degree()) + 1; ++n) {
        for (int l : lm.chains().lengths(n)) {
            const auto& cells = lm.chains().block(n, l).cells;
            for (const auto& cell : cells) {
                typename HochschildWindow<F>::Terms raw;
                lm.boundary(cell, f.one(), raw);
                typename OmegaWindow<F>::Terms down;
                for (auto& [c, v] : raw)
                    if (cell_module(c) == 0) down.push_back({cell_word(c), v});
                down = om.chains().consolidate(down);
                typename OmegaWindow<F>::Terms other;
                if (cell_module(cell) == 0) other = om.differential({{cell_word(cell), f.one()}});
                if (down != other) throw InternalError("eps (x) 1 is not a chain map at " + lm.cell_label(cell));
                ++checked;
            }
        }
    }
    return checked;
}

namespace detail {

template <class F>
using CoordVec = std::vector<std::pair<std::size_t, typename F::value_type>>;

// Product of coordinate vectors through the structure constants of a ring.
template <class F>
std::optional<CoordVec<F>> ring_multiply(const F& f, const HomologyRing& r, const CoordVec<F>& x, const CoordVec<F>& y) {
    std::map<std::size_t, typename F::value_type> acc;
    for (const auto& [i, a] : x)
        for (const auto& [j, b] : y) {
            const auto* sc = r.product(i, j);
            if (!sc) return std::nullopt;
            for (const auto& [k, v] : sc->result) {
                auto t = f.mul(f.mul(a, b), v.to(f));
                auto [it, ins] = acc.emplace(k, t);
                if (!ins) it->second = f.add(it->second, t);
            }
        }
    CoordVec<F> out;
    for (auto& [k, v] : acc)
        if (!f.is_zero(v)) out.push_back({k, v});
    return out;
}

template <class F>
std::vector<std::pair<std::size_t, Scalar>> to_scalars(const F& f, const CoordVec<F>& v) {
    std::vector<std::pair<std::size_t, Scalar>> out;
    for (const auto& [k, x] : v) out.push_back({k, Scalar::from_value(f, x)});
    return out;
}

template <class F>
int coord_degree(const HomologyRing& r, const CoordVec<F>& v) {
    return r.classes[v.front().first].degree;
}

}  // namespace detail

struct IntersectionOptions {
    RingOptions ring;
    bool verify_lifts = true;
    std::size_t max_lift_classes = 200;
};

/// I = H(eps (x) 1) on homology bases over the window, with kernel and image,
/// multiplicativity, nilpotency of the kernel, centrality of the image, and
/// the lifting criterion cross-checked against image membership.
template <class F>
IntersectionReport induced_I(HochschildWindow<F>& lm, OmegaWindow<F>& om, const HomologyRing& ring_lm,
                             const HomologyRing& ring_om, const IntersectionOptions& opts = {}) {
    using V = typename F::value_type;
    using Vec = SparseVector<F>;
    const auto& f = lm.field();
    if (ring_lm.max_degree != ring_om.max_degree || ring_lm.field != ring_om.field)
        throw ShapeError("loop and omega rings use different windows");
    IntersectionReport rep;
    rep.algebra = lm.algebra().name;
    rep.field = f.spec();
    rep.formal_dimension = lm.algebra().formal_dimension;
    rep.min_degree = ring_lm.min_degree;
    rep.max_degree = ring_lm.max_degree;
    intersection_chain_map(lm, om);
    rep.chain_map_ok = true;

    // I of every loop class in omega-class coordinates.
    std::vector<detail::CoordVec<F>> image_of(ring_lm.classes.size());
    for (int n = rep.min_degree; n < rep.max_degree; ++n) {
        auto lm_idx = ring_lm.classes_in_degree(n);
        std::size_t om_dim = ring_om.in_window(n) ? ring_om.betti.at(n) : 0;
        std::size_t om_off = ring_om.offset(n);
        rep.loop_dim[n] = lm_idx.size();
        rep.omega_dim[n] = om_dim;
        SparseMatrix<F> m(om_dim, lm_idx.size());
        for (std::size_t c = 0; c < lm_idx.size(); ++c) {
            if (om_dim == 0) continue;
            auto chain = lm.representative(n, c);
            typename OmegaWindow<F>::Terms down;
            for (auto& [cell, v] : chain)
                if (cell_module(cell) == 0) down.push_back({cell_word(cell), v});
            auto coords = om.project(n, down);
            std::vector<std::pair<Index, V>> pairs;
            for (std::size_t k = 0; k < coords.size(); ++k)
                if (!f.is_zero(coords[k])) {
                    pairs.push_back({static_cast<Index>(k), coords[k]});
                    image_of[lm_idx[c]].push_back({om_off + k, coords[k]});
                    rep.matrix[n].push_back({om_off + k, lm_idx[c], Scalar::from_value(f, coords[k])});
                }
            m.columns[c] = Vec::from_pairs(f, std::move(pairs));
        }
        ColumnReducer<F> red(f);
        for (const auto& col : m.columns) {
            auto r = red.insert(col);
            if (r.independent) {
                std::vector<std::pair<std::size_t, Scalar>> v;
                for (const auto& t : red.vector(r.slot).terms) v.push_back({om_off + t.index, Scalar::from_value(f, t.value)});
                rep.image_basis[n].push_back(std::move(v));
            }
        }
        rep.rank[n] = red.rank();
        for (const auto& k : kernel_basis(f, m)) {
            std::vector<std::pair<std::size_t, Scalar>> v;
            for (const auto& t : k.terms) v.push_back({lm_idx[t.index], Scalar::from_value(f, t.value)});
            rep.kernel_basis[n].push_back(std::move(v));
        }
        if (n >= 0) rep.surjective[n] = red.rank() == om_dim;
    }

    // Multiplicativity on every recorded loop structure constant.
    if (ring_lm.products_computed && ring_om.products_computed) {
        for (const auto& sc : ring_lm.products) {
            detail::CoordVec<F> lhs;
            std::map<std::size_t, V> acc;
            for (const auto& [k, v] : sc.result)
                for (const auto& [o, x] : image_of[k]) {
                    auto t = f.mul(v.to(f), x);
                    auto [it, ins] = acc.emplace(o, t);
                    if (!ins) it->second = f.add(it->second, t);
                }
            for (auto& [o, x] : acc)
                if (!f.is_zero(x)) lhs.push_back({o, x});
            const auto& xi = image_of[sc.left];
            const auto& yj = image_of[sc.right];
            detail::CoordVec<F> rhs;
            if (!xi.empty() && !yj.empty()) {
                auto p = detail::ring_multiply(f, ring_om, xi, yj);
                if (!p) continue;  // omega product outside its window
                rhs = *p;
            }
            ++rep.multiplicativity_checked;
            if (lhs != rhs)
                rep.multiplicativity_failures.push_back("I(" + ring_lm.classes[sc.left].label + " * " +
                                                        ring_lm.classes[sc.right].label + ")");
        }
    }

    // Nilpotency of the kernel.
    auto& nil = rep.nilpotency;
    nil.bound = rep.formal_dimension / 2;
    std::vector<detail::CoordVec<F>> kernel;
    for (const auto& [n, vecs] : rep.kernel_basis)
        for (const auto& v : vecs) {
            detail::CoordVec<F> c;
            for (const auto& [k, s] : v) c.push_back({k, s.to(f)});
            kernel.push_back(std::move(c));
        }
    if (!kernel.empty()) nil.observed = 1;
    if (!kernel.empty() && !ring_lm.products_computed) {
        nil.complete = false;
    } else {
        std::vector<detail::CoordVec<F>> power = kernel;
        for (int m = 2; m <= nil.bound + 1 && !power.empty(); ++m) {
            std::map<int, ColumnReducer<F>> spans;
            std::vector<detail::CoordVec<F>> next;
            for (const auto& x : power)
                for (const auto& y : kernel) {
                    int deg = detail::coord_degree<F>(ring_lm, x) + detail::coord_degree<F>(ring_lm, y);
                    if (!ring_lm.in_window(deg)) {
                        ++nil.unobserved;
                        continue;
                    }
                    auto p = detail::ring_multiply(f, ring_lm, x, y);
                    if (!p) {
                        ++nil.unobserved;
                        continue;
                    }
                    if (p->empty()) continue;
                    std::vector<std::pair<Index, V>> pairs;
                    for (const auto& [k, v] : *p) pairs.push_back({static_cast<Index>(k), v});
                    auto it = spans.try_emplace(deg, f).first;
                    if (it->second.insert(Vec::from_pairs(f, std::move(pairs))).independent) next.push_back(*p);
                }
            if (next.empty()) break;
            nil.observed = m;
            power = std::move(next);
        }
    }
    nil.respected = nil.observed <= nil.bound;

    // Centrality of the image in H(Omega M).
    auto& cen = rep.centrality;
    if (ring_om.products_computed) {
        for (const auto& [n, vecs] : rep.image_basis)
            for (const auto& v : vecs) {
                detail::CoordVec<F> x;
                for (const auto& [k, s] : v) x.push_back({k, s.to(f)});
                for (std::size_t j = 0; j < ring_om.classes.size(); ++j) {
                    int q = ring_om.classes[j].degree;
                    if (!ring_om.in_window(n + q)) {
                        ++cen.unobserved;
                        continue;
                    }
                    detail::CoordVec<F> y{{j, f.one()}};
                    auto xy = detail::ring_multiply(f, ring_om, x, y);
                    auto yx = detail::ring_multiply(f, ring_om, y, x);
                    if (!xy || !yx) {
                        ++cen.unobserved;
                        continue;
                    }
                    ++cen.checked;
                    std::map<std::size_t, V> acc;
                    for (const auto& [k, a] : *xy) acc[k] = a;
                    V sg = f.from_int(sign_of(static_cast<long>(n) * q));
                    for (const auto& [k, a] : *yx) {
                        auto [it, ins] = acc.emplace(k, f.neg(f.mul(sg, a)));
                        if (!ins) it->second = f.sub(it->second, f.mul(sg, a));
                    }
                    bool zero = true;
                    for (const auto& [k, a] : acc) zero = zero && f.is_zero(a);
                    if (!zero)
                        cen.violations.push_back("[I-image in degree " + std::to_string(n) + ", " +
                                                 ring_om.classes[j].label + "] != 0");
                }
            }
    } else {
        for (const auto& [n, vecs] : rep.image_basis) cen.unobserved += vecs.size();
    }

    // Lifting criterion versus image membership, for every omega class.
    if (opts.verify_lifts && ring_om.classes.size() <= opts.max_lift_classes) {
        for (int n = std::max(rep.min_degree, 0); n < rep.max_degree; ++n) {
            const auto idx = ring_om.classes_in_degree(n);
            ColumnReducer<F> image(f);
            std::size_t off = ring_om.offset(n);
            for (const auto& v : rep.image_basis[n]) {
                std::vector<std::pair<Index, V>> pairs;
                for (const auto& [k, s] : v) pairs.push_back({static_cast<Index>(k - off), s.to(f)});
                image.insert(Vec::from_pairs(f, std::move(pairs)));
            }
            for (std::size_t k = 0; k < idx.size(); ++k) {
                WordChain alpha;
                for (const auto& [w, v] : om.representative(n, k)) alpha[w] = Scalar::from_value(f, v);
                bool lifts = lift_witness(om.cobar(), alpha, f).found;
                bool in_image = image.contains(Vec::unit(f, static_cast<Index>(k)));
                ++rep.lift_checks;
                if (lifts != in_image)
                    rep.lift_disagreements.push_back(ring_om.classes[idx[k]].label + ": lift " + (lifts ? "exists" : "missing") +
                                                     " but class is " + (in_image ? "" : "not ") + "in the image");
            }
        }
    }
    return rep;
}

/// Degree -> whether I_n is onto H_n(Omega M).
inline std::map<int, bool> surjectivity_profile(const IntersectionReport& r) { return r.surjective; }

/// Everything needed for the intersection morphism of one algebra and window.
struct IntersectionResult {
    HomologyRing loop;
    HomologyRing omega;
    IntersectionReport report;
};

inline IntersectionResult intersection(const FDGA& a, int min_degree, int max_degree, const IntersectionOptions& opts = {}) {
    return visit_field(a.field, [&](auto field) {
        using F = decltype(field);
        HochschildWindow<F> lm(a, self_bimodule(a), field, min_degree, max_degree);
        OmegaWindow<F> om(lm.cobar(), field, max_degree);
        IntersectionResult out;
        out.loop = homology_ring(lm, opts.ring);
        out.omega = homology_ring(om, opts.ring);
        out.report = induced_I(lm, om, out.loop, out.omega, opts);
        return out;
    });
}

}  // namespace loopalg
