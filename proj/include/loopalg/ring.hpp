#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loopalg/hochschild.hpp"
#include "loopalg/omega.hpp"

namespace loopalg {

struct RingClass {
    int degree = 0;
    std::string label;
    std::vector<std::pair<std::string, Scalar>> representative;  // (cell label, coefficient)
};

/// x_left * x_right = sum result[k].second * class result[k].first.
struct StructureConstant {
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<std::pair<std::size_t, Scalar>> result;
};

/// Homology in a degree window with representatives and, when computed,
/// structure constants for every ordered pair whose product degree is in the
/// window.
struct HomologyRing {
    std::string kind;  // "loop", "omega", "hochschild"
    std::string algebra;
    FieldSpec field;
    int shift = 0;       // formal dimension; loop degrees are shifted by it
    int min_degree = 0;  // reported degrees are [min_degree, max_degree)
    int max_degree = 0;
    std::vector<int> partial_degrees;
    std::map<int, std::size_t> betti;
    std::vector<RingClass> classes;  // ordered by degree
    bool products_computed = false;
    std::string products_note;
    std::vector<StructureConstant> products;
    std::size_t unobserved_products = 0;
    std::optional<std::size_t> unit;

    std::vector<std::size_t> classes_in_degree(int degree) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i].degree == degree) out.push_back(i);
        return out;
    }

    std::size_t offset(int degree) const {
        std::size_t k = 0;
        while (k < classes.size() && classes[k].degree < degree) ++k;
        return k;
    }

    std::optional<std::size_t> find(const std::string& label) const {
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i].label == label) return i;
        return std::nullopt;
    }

    bool in_window(int degree) const { return degree >= min_degree && degree < max_degree; }

    const StructureConstant* product(std::size_t l, std::size_t r) const {
        auto it = product_index_.find({l, r});
        return it == product_index_.end() ? nullptr : &products[it->second];
    }

    void index_products() {
        product_index_.clear();
        for (std::size_t k = 0; k < products.size(); ++k) product_index_[{products[k].left, products[k].right}] = k;
    }

    std::size_t total_betti() const { return classes.size(); }

private:
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> product_index_;
};

struct RingOptions {
    bool products = true;
    // Structure constants are skipped when the window holds more classes.
    std::size_t max_classes_for_products = 400;
};

namespace detail {

/// Friendly names for the loop homology of a sphere: a = u(x)1, b = u(x)v,
/// c = 1(x)v^2 for even spheres; a = u(x)1, v = 1(x)v for odd spheres.
inline std::optional<std::string> sphere_loop_label(int n, std::size_t module, std::size_t m) {
    auto pow = [](const std::string& x, std::size_t k) { return k == 1 ? x : x + "^" + std::to_string(k); };
    if (n % 2 == 1) {
        if (module == 0) return m == 0 ? std::string("1") : pow("v", m);
        return m == 0 ? std::string("a") : "a " + pow("v", m);
    }
    std::size_t k = m / 2;
    if (module == 0) {
        if (m == 0) return std::string("1");
        if (m % 2 == 0) return pow("c", k);
        return k == 0 ? std::string("v") : "v " + pow("c", k);
    }
    if (m % 2 == 0) return k == 0 ? std::string("a") : "a " + pow("c", k);
    return k == 0 ? std::string("b") : "b " + pow("c", k);
}

}  // namespace detail

/// Assembles a HomologyRing from any window exposing betti / representative /
/// project / multiply / cell_label / cell_degree.
template <class W>
HomologyRing assemble_ring(W& w, const std::string& kind, const std::string& algebra, int shift,
                           const RingOptions& opts,
                           const std::function<std::optional<std::string>(const typename W::Terms&)>& namer = {}) {
    const auto& field = w.field();
    HomologyRing r;
    r.kind = kind;
    r.algebra = algebra;
    r.field = field.spec();
    r.shift = shift;
    r.min_degree = w.min_degree();
    r.max_degree = w.max_degree();
    r.partial_degrees = {w.min_degree() - 1, w.max_degree()};
    std::vector<typename W::Terms> reps;
    std::set<std::string> used;
    for (int n = r.min_degree; n < r.max_degree; ++n) {
        std::size_t b = w.betti(n);
        r.betti[n] = b;
        for (std::size_t k = 0; k < b; ++k) {
            auto rep = w.representative(n, k);
            RingClass c;
            c.degree = n;
            for (const auto& [cell, v] : rep) c.representative.push_back({w.cell_label(cell), Scalar::from_value(field, v)});
            std::optional<std::string> name = namer ? namer(rep) : std::nullopt;
            if (!name || used.count(*name)) name = "h" + std::to_string(n) + "_" + std::to_string(k);
            used.insert(*name);
            c.label = *name;
            r.classes.push_back(std::move(c));
            reps.push_back(std::move(rep));
        }
    }
    // Unit: the class of the empty word / 1(x)1 in degree 0.
    if (r.in_window(0)) {
        auto coords = w.project(0, w.unit());
        std::size_t off = r.offset(0);
        std::size_t nonzero = 0;
        std::size_t where = 0;
        for (std::size_t k = 0; k < coords.size(); ++k)
            if (!field.is_zero(coords[k])) {
                ++nonzero;
                where = k;
            }
        if (nonzero == 1 && field.equal(coords[where], field.one())) r.unit = off + where;
    }
    if (!opts.products) {
        r.products_note = "products not requested";
        return r;
    }
    if (r.classes.size() > opts.max_classes_for_products) {
        r.products_note = "products skipped: " + std::to_string(r.classes.size()) + " classes exceed the limit of " +
                          std::to_string(opts.max_classes_for_products);
        return r;
    }
    r.products_computed = true;
    for (std::size_t i = 0; i < r.classes.size(); ++i)
        for (std::size_t j = 0; j < r.classes.size(); ++j) {
            int deg = r.classes[i].degree + r.classes[j].degree;
            if (deg < w.bottom_degree()) {
                // Below the lowest nonzero chain group: the product vanishes.
                r.products.push_back({i, j, {}});
                continue;
            }
            if (!r.in_window(deg)) {
                ++r.unobserved_products;
                continue;
            }
            auto coords = w.project(deg, w.multiply(reps[i], reps[j]));
            StructureConstant sc{i, j, {}};
            std::size_t off = r.offset(deg);
            for (std::size_t k = 0; k < coords.size(); ++k)
                if (!field.is_zero(coords[k])) sc.result.push_back({off + k, Scalar::from_value(field, coords[k])});
            r.products.push_back(std::move(sc));
        }
    r.index_products();
    return r;
}

/// Product of two cycles reduced to homology coordinates.
template <class W>
std::vector<typename W::V> cup_product(W& w, const typename W::Terms& x, const typename W::Terms& y) {
    if (x.empty() || y.empty()) return {};
    int deg = w.cell_degree(x.front().first) + w.cell_degree(y.front().first);
    w.require_in_window(deg);
    return w.project(deg, w.multiply(x, y));
}

/// In-window checks of the recorded structure constants: unit, associativity
/// and, when asked, graded commutativity. Products leaving the window are
/// skipped, never counted as zero.
struct RingAxiomReport {
    std::size_t unit_checked = 0;
    std::size_t commutativity_checked = 0;
    std::size_t associativity_checked = 0;
    bool associativity_complete = true;  // false when the triple budget ran out
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

namespace detail {

using ScalarCoords = std::map<std::size_t, Scalar>;

inline std::optional<ScalarCoords> ring_product(const HomologyRing& r, const ScalarCoords& x, const ScalarCoords& y) {
    ScalarCoords out;
    for (const auto& [i, a] : x)
        for (const auto& [j, b] : y) {
            const auto* sc = r.product(i, j);
            if (!sc) return std::nullopt;
            for (const auto& [k, v] : sc->result) {
                auto [it, ins] = out.emplace(k, a * b * v);
                if (!ins) {
                    it->second += a * b * v;
                    if (it->second.is_zero()) out.erase(it);
                }
            }
        }
    return out;
}

}  // namespace detail

inline RingAxiomReport check_ring_axioms(const HomologyRing& r, bool graded_commutative,
                                         std::size_t max_triples = 200000) {
    RingAxiomReport out;
    if (!r.products_computed) {
        out.associativity_complete = false;
        return out;
    }
    const auto one = Scalar::from_int(r.field, 1);
    auto basis = [&](std::size_t i) { return detail::ScalarCoords{{i, one}}; };
    const std::size_t n = r.classes.size();
    if (r.unit)
        for (std::size_t i = 0; i < n; ++i) {
            auto l = detail::ring_product(r, basis(*r.unit), basis(i));
            auto rt = detail::ring_product(r, basis(i), basis(*r.unit));
            ++out.unit_checked;
            if ((l && *l != basis(i)) || (rt && *rt != basis(i))) out.failures.push_back("unit fails on " + r.classes[i].label);
        }
    if (graded_commutative)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                auto xy = detail::ring_product(r, basis(i), basis(j));
                auto yx = detail::ring_product(r, basis(j), basis(i));
                if (!xy || !yx) continue;
                ++out.commutativity_checked;
                Scalar sg = Scalar::from_int(r.field, sign_of(static_cast<long>(r.classes[i].degree) * r.classes[j].degree));
                detail::ScalarCoords signed_yx;
                for (const auto& [k, v] : *yx) signed_yx[k] = v * sg;
                if (*xy != signed_yx)
                    out.failures.push_back("graded commutativity fails on " + r.classes[i].label + ", " + r.classes[j].label);
            }
    std::size_t triples = 0;
    for (std::size_t i = 0; i < n && out.associativity_complete; ++i)
        for (std::size_t j = 0; j < n && out.associativity_complete; ++j) {
            auto xy = detail::ring_product(r, basis(i), basis(j));
            if (!xy) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (triples == max_triples) {
                    out.associativity_complete = false;
                    break;
                }
                auto yz = detail::ring_product(r, basis(j), basis(k));
                if (!yz) continue;
                auto left = detail::ring_product(r, *xy, basis(k));
                auto right = detail::ring_product(r, basis(i), *yz);
                if (!left || !right) continue;
                ++triples;
                ++out.associativity_checked;
                if (*left != *right)
                    out.failures.push_back("associativity fails on " + r.classes[i].label + ", " + r.classes[j].label +
                                           ", " + r.classes[k].label);
            }
        }
    return out;
}

/// Loop homology ring H(A (x) T(W), D) over a window.
template <class F>
HomologyRing homology_ring(HochschildWindow<F>& w, const RingOptions& opts = {}) {
    if (w.module().kind != "self") throw NotSupported("the ring structure needs coefficients in A");
    const FDGA& a = w.algebra();
    std::function<std::optional<std::string>(const typename HochschildWindow<F>::Terms&)> namer;
    if (a.dim() == 1 && a.upper(0) == a.formal_dimension && a.has_zero_differential()) {
        const int n = a.formal_dimension;
        namer = [n](const typename HochschildWindow<F>::Terms& rep) -> std::optional<std::string> {
            if (rep.size() != 1) return std::nullopt;
            return detail::sphere_loop_label(n, cell_module(rep.front().first), rep.front().first.size() - 1);
        };
    }
    return assemble_ring(w, "loop", a.name, a.formal_dimension, opts, namer);
}

template <class F>
HomologyRing homology_ring(OmegaWindow<F>& w, const RingOptions& opts = {}) {
    std::function<std::optional<std::string>(const typename OmegaWindow<F>::Terms&)> namer;
    if (w.cobar().size() == 1)
        namer = [&w](const typename OmegaWindow<F>::Terms& rep) -> std::optional<std::string> {
            if (rep.size() != 1) return std::nullopt;
            return power_label(w.cobar(), rep.front().first);
        };
    return assemble_ring(w, "omega", w.cobar().name, 0, opts, namer);
}

/// Hochschild homology groups with general coefficients (no products).
template <class F>
HomologyRing hochschild_homology(HochschildWindow<F>& w) {
    RingOptions opts;
    opts.products = false;
    auto r = assemble_ring(w, "hochschild", w.algebra().name, w.algebra().formal_dimension, opts);
    r.products_note = "coefficients " + w.module().kind;
    return r;
}

/// H(T(W), d) in degrees [0, max_degree).
inline HomologyRing omega_homology(const CobarAlgebra& c, int max_degree, const RingOptions& opts = {}) {
    return visit_field(c.field, [&](auto field) {
        OmegaWindow<decltype(field)> w(c, field, max_degree);
        return homology_ring(w, opts);
    });
}

inline HomologyRing loop_homology(const FDGA& a, int min_degree, int max_degree, const RingOptions& opts = {}) {
    return visit_field(a.field, [&](auto field) {
        HochschildWindow<decltype(field)> w(a, self_bimodule(a), field, min_degree, max_degree);
        return homology_ring(w, opts);
    });
}

inline HomologyRing hochschild_homology(const FDGA& a, Coefficients k, int min_degree, int max_degree) {
    return visit_field(a.field, [&](auto field) {
        HochschildWindow<decltype(field)> w(a, coefficient_module(a, k), field, min_degree, max_degree);
        return hochschild_homology(w);
    });
}

/// The algebra whose loop homology is the E2 page: A itself when d = 0, its
/// cohomology algebra when A is commutative.
inline FDGA e2_algebra(const FDGA& a) {
    if (a.has_zero_differential()) return a;
    if (!is_graded_commutative(a))
        throw NotSupported("E2 page of a noncommutative algebra with nonzero differential");
    auto h = cohomology_algebra(a);
    h.name = a.name;
    return h;
}

inline HomologyRing e2_page(const FDGA& a, int min_degree, int max_degree, const RingOptions& opts = {}) {
    auto r = loop_homology(e2_algebra(a), min_degree, max_degree, opts);
    r.kind = "e2";
    return r;
}

}  // namespace loopalg
