#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "loopalg/errors.hpp"
#include "loopalg/linalg.hpp"
#include "loopalg/scalar.hpp"

namespace loopalg {

/// Sparse linear combination of basis indices.
using Combination = std::map<std::size_t, Scalar>;

inline void accumulate(Combination& into, std::size_t index, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = into.emplace(index, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) into.erase(it);
    }
}

inline void accumulate(Combination& into, const Combination& x, const Scalar& c) {
    for (const auto& [i, v] : x) accumulate(into, i, v * c);
}

/// Finite-dimensional augmented DGA. Only the augmentation ideal is listed;
/// the unit is implicit. Degrees are stored homologically: a cohomology class
/// of degree n sits at lower degree -n.
struct FDGA {
    std::string name;
    FieldSpec field;
    GradedBasis basis;
    std::map<std::pair<std::size_t, std::size_t>, Combination> products;
    std::vector<Combination> differential;
    int formal_dimension = 0;

    std::size_t dim() const { return basis.size(); }
    int upper(std::size_t i) const { return -basis.degree(i); }

    const Combination& product(std::size_t i, std::size_t j) const {
        static const Combination none;
        auto it = products.find({i, j});
        return it == products.end() ? none : it->second;
    }

    const Combination& d(std::size_t i) const {
        static const Combination none;
        return i < differential.size() ? differential[i] : none;
    }

    bool has_zero_differential() const {
        return std::all_of(differential.begin(), differential.end(), [](const auto& c) { return c.empty(); });
    }

    Scalar one() const { return Scalar::from_int(field, 1); }
    Scalar sign(long exponent) const { return Scalar::from_int(field, sign_of(exponent)); }

    /// Product of two elements of the augmentation ideal.
    Combination multiply(const Combination& x, const Combination& y) const {
        Combination out;
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) accumulate(out, product(i, j), a * b);
        return out;
    }

    Combination apply_d(const Combination& x) const {
        Combination out;
        for (const auto& [i, a] : x) accumulate(out, d(i), a);
        return out;
    }

    Combination element(std::size_t i) const { return {{i, one()}}; }
};

/// Reorders the basis by cohomological degree, then label.
inline FDGA canonicalize(const FDGA& a) {
    std::vector<std::size_t> order(a.dim());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (a.upper(x) != a.upper(y)) return a.upper(x) < a.upper(y);
        return a.basis.label(x) < a.basis.label(y);
    });
    std::vector<std::size_t> where(a.dim());
    for (std::size_t k = 0; k < order.size(); ++k) where[order[k]] = k;
    auto remap = [&](const Combination& c) {
        Combination out;
        for (const auto& [i, v] : c) out.emplace(where[i], v);
        return out;
    };
    FDGA b;
    b.name = a.name;
    b.field = a.field;
    b.formal_dimension = a.formal_dimension;
    for (auto i : order) b.basis.add(a.basis.label(i), a.basis.degree(i));
    b.differential.resize(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) b.differential[where[i]] = remap(a.d(i));
    for (const auto& [key, c] : a.products)
        if (!c.empty()) b.products[{where[key.first], where[key.second]}] = remap(c);
    return b;
}

struct Violation {
    std::string kind;     // e.g. "associativity", "leibniz"
    std::string message;  // names the offending basis elements
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool commutative = false;
    bool poincare = false;

    bool valid() const { return violations.empty(); }
    bool has(const std::string& kind) const {
        return std::any_of(violations.begin(), violations.end(), [&](const auto& v) { return v.kind == kind; });
    }
};

namespace detail {

inline std::string describe(const FDGA& a, const Combination& c) {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, v] : c) {
        if (!first) os << " + ";
        first = false;
        os << v.to_string() << "*" << a.basis.label(i);
    }
    return os.str();
}

/// Matrix of d from upper degree p to p+1 over the typed field.
template <class F>
SparseMatrix<F> differential_matrix(const F& field, const FDGA& a, const std::vector<std::size_t>& source,
                                    const std::vector<std::size_t>& target) {
    std::map<std::size_t, Index> pos;
    for (std::size_t k = 0; k < target.size(); ++k) pos[target[k]] = static_cast<Index>(k);
    SparseMatrix<F> m(target.size(), source.size());
    for (std::size_t c = 0; c < source.size(); ++c) {
        std::vector<std::pair<Index, typename F::value_type>> pairs;
        for (const auto& [j, v] : a.d(source[c])) pairs.push_back({pos.at(j), v.to(field)});
        m.columns[c] = SparseVector<F>::from_pairs(field, std::move(pairs));
    }
    return m;
}

}  // namespace detail

/// Cohomology of an FDGA in positive degrees: for each upper degree the
/// representative cocycles (as combinations) and a projector.
struct Cohomology {
    std::map<int, std::vector<Combination>> representatives;
    // Coordinates of a cocycle of the given upper degree.
    std::function<std::vector<Scalar>(int, const Combination&)> project;

    std::size_t dim(int degree) const {
        auto it = representatives.find(degree);
        return it == representatives.end() ? 0 : it->second.size();
    }
};

inline Cohomology cohomology(const FDGA& a) {
    return visit_field(a.field, [&](auto field) {
        using F = decltype(field);
        std::map<int, std::vector<std::size_t>> by_degree;
        for (std::size_t i = 0; i < a.dim(); ++i) by_degree[a.upper(i)].push_back(i);
        auto slice = [&](int p) {
            auto it = by_degree.find(p);
            return it == by_degree.end() ? std::vector<std::size_t>{} : it->second;
        };
        auto slices = std::make_shared<std::map<int, std::pair<std::vector<std::size_t>, HomologySlice<F>>>>();
        Cohomology h;
        for (const auto& [p, idx] : by_degree) {
            auto d_in = detail::differential_matrix(field, a, slice(p - 1), idx);
            auto d_out = detail::differential_matrix(field, a, idx, slice(p + 1));
            auto hs = homology_of_slice(field, d_in, d_out, p);
            auto& reps = h.representatives[p];
            for (const auto& r : hs.representatives()) {
                Combination c;
                for (const auto& t : r.terms) c.emplace(idx[t.index], Scalar::from_value(field, t.value));
                reps.push_back(std::move(c));
            }
            slices->emplace(p, std::make_pair(idx, std::move(hs)));
        }
        h.project = [slices, field, fs = a.field](int p, const Combination& x) {
            auto it = slices->find(p);
            if (it == slices->end()) return std::vector<Scalar>{};
            const auto& [idx, hs] = it->second;
            std::vector<std::pair<Index, typename F::value_type>> pairs;
            for (const auto& [i, v] : x) {
                auto k = std::find(idx.begin(), idx.end(), i);
                if (k == idx.end()) throw ShapeError("element not homogeneous of degree " + std::to_string(p));
                pairs.push_back({static_cast<Index>(k - idx.begin()), v.to(field)});
            }
            auto coords = hs.project(field, SparseVector<F>::from_pairs(field, std::move(pairs)));
            std::vector<Scalar> out;
            for (const auto& c : coords) out.push_back(Scalar::from_value(field, c));
            (void)fs;
            return out;
        };
        return h;
    });
}

/// Poincare duality on cohomology: H^d is a line and the pairings
/// H^k x H^{d-k} -> H^d are perfect.
inline bool poincare_duality(const FDGA& a) {
    auto h = cohomology(a);
    const int d = a.formal_dimension;
    if (h.dim(d) != 1) return false;
    for (const auto& [p, reps] : h.representatives) {
        if (p <= 0 || p >= d) {
            if (p > d && !reps.empty()) return false;
            continue;
        }
        if (h.dim(d - p) != reps.size()) return false;
    }
    for (int p = 1; p < d; ++p) {
        std::size_t n = h.dim(p);
        if (n == 0) continue;
        const auto& left = h.representatives.at(p);
        const auto& right = h.representatives.at(d - p);
        bool ok = visit_field(a.field, [&](auto field) {
            using F = decltype(field);
            SparseMatrix<F> m(n, n);
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<std::pair<Index, typename F::value_type>> pairs;
                for (std::size_t i = 0; i < n; ++i) {
                    auto coords = h.project(d, a.multiply(left[i], right[j]));
                    pairs.push_back({static_cast<Index>(i), coords.at(0).to(field)});
                }
                m.columns[j] = SparseVector<F>::from_pairs(field, std::move(pairs));
            }
            return rank_of(field, m) == n;
        });
        if (!ok) return false;
    }
    return true;
}

inline bool is_graded_commutative(const FDGA& a) {
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            Combination swapped;
            accumulate(swapped, a.product(j, i), a.sign(static_cast<long>(a.upper(i)) * a.upper(j)));
            if (a.product(i, j) != swapped) return false;
        }
    return true;
}

inline ValidationReport validate_fdga(const FDGA& a) {
    ValidationReport r;
    auto add = [&](std::string kind, std::string msg) { r.violations.push_back({std::move(kind), std::move(msg)}); };
    const auto& L = [&](std::size_t i) -> const std::string& { return a.basis.label(i); };
    const std::size_t n = a.dim();

    if (a.formal_dimension < 2) add("connectivity", "formal dimension " + std::to_string(a.formal_dimension) + " < 2");
    for (std::size_t i = 0; i < n; ++i) {
        int p = a.upper(i);
        if (p < 2) add("connectivity", "generator " + L(i) + " in degree " + std::to_string(p) + " < 2");
        if (p > a.formal_dimension)
            add("connectivity", "generator " + L(i) + " in degree " + std::to_string(p) + " above formal dimension");
    }
    bool indices_ok = a.differential.size() <= n;
    for (const auto& [key, c] : a.products) {
        if (key.first >= n || key.second >= n) indices_ok = false;
        for (const auto& [k, v] : c) {
            if (k >= n) {
                indices_ok = false;
                continue;
            }
            if (!v.is_zero() && key.first < n && key.second < n && a.upper(k) != a.upper(key.first) + a.upper(key.second))
                add("degree", "product " + L(key.first) + "*" + L(key.second) + " has a term " + L(k) +
                                  " of the wrong degree");
        }
    }
    for (std::size_t i = 0; i < a.differential.size(); ++i)
        for (const auto& [j, v] : a.differential[i]) {
            if (j >= n) {
                indices_ok = false;
                continue;
            }
            if (i < n && a.upper(j) != a.upper(i) + 1)
                add("degree", "d(" + L(i) + ") has a term " + L(j) + " of the wrong degree");
        }
    if (!indices_ok) {
        add("structure", "table index out of range");
        return r;
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                auto lhs = a.multiply(a.product(i, j), a.element(k));
                auto rhs = a.multiply(a.element(i), a.product(j, k));
                if (lhs != rhs)
                    add("associativity", "(" + L(i) + "*" + L(j) + ")*" + L(k) + " = " + detail::describe(a, lhs) +
                                             " but " + L(i) + "*(" + L(j) + "*" + L(k) + ") = " +
                                             detail::describe(a, rhs));
            }
    for (std::size_t i = 0; i < n; ++i) {
        auto dd = a.apply_d(a.d(i));
        if (!dd.empty()) add("d_squared", "d(d(" + L(i) + ")) = " + detail::describe(a, dd));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto lhs = a.apply_d(a.product(i, j));
            Combination rhs = a.multiply(a.d(i), a.element(j));
            accumulate(rhs, a.multiply(a.element(i), a.d(j)), a.sign(a.upper(i)));
            if (lhs != rhs)
                add("leibniz", "d(" + L(i) + "*" + L(j) + ") = " + detail::describe(a, lhs) + " but Leibniz gives " +
                                   detail::describe(a, rhs));
        }

    r.commutative = is_graded_commutative(a);
    if (r.valid()) {
        try {
            r.poincare = poincare_duality(a);
        } catch (const Error&) {
            r.poincare = false;
        }
    }
    return r;
}

/// Differential graded bimodule over an FDGA, with an explicit basis.
/// left[i][s] = e_i . n_s and right[i][s] = n_s . e_i; the unit acts as identity.
struct Bimodule {
    std::string kind;  // "self", "trivial", "dual" or "general"
    FieldSpec field;
    GradedBasis basis;  // lower degrees
    std::vector<Combination> differential;
    std::vector<std::vector<Combination>> left;
    std::vector<std::vector<Combination>> right;

    std::size_t dim() const { return basis.size(); }
    int lower(std::size_t s) const { return basis.degree(s); }

    Combination act_left(std::size_t i, const Combination& x) const {
        Combination out;
        for (const auto& [s, v] : x) accumulate(out, left[i][s], v);
        return out;
    }
    Combination act_right(const Combination& x, std::size_t i) const {
        Combination out;
        for (const auto& [s, v] : x) accumulate(out, right[i][s], v);
        return out;
    }
    Combination act_left(const FDGA& a, const Combination& e, const Combination& x) const {
        Combination out;
        for (const auto& [i, v] : e) accumulate(out, act_left(i, x), v);
        (void)a;
        return out;
    }
    Combination act_right(const FDGA& a, const Combination& x, const Combination& e) const {
        Combination out;
        for (const auto& [i, v] : e) accumulate(out, act_right(x, i), v);
        (void)a;
        return out;
    }
    Combination apply_d(const Combination& x) const {
        Combination out;
        for (const auto& [s, v] : x) accumulate(out, differential[s], v);
        return out;
    }
    bool has_zero_differential() const {
        return std::all_of(differential.begin(), differential.end(), [](const auto& c) { return c.empty(); });
    }
};

/// A as a bimodule over itself; basis element 0 is the unit.
inline Bimodule self_bimodule(const FDGA& a) {
    Bimodule m;
    m.kind = "self";
    m.field = a.field;
    m.basis.add("1", 0);
    for (std::size_t i = 0; i < a.dim(); ++i) m.basis.add(a.basis.label(i), a.basis.degree(i));
    m.differential.resize(m.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (const auto& [j, v] : a.d(i)) m.differential[i + 1].emplace(j + 1, v);
    m.left.assign(a.dim(), std::vector<Combination>(m.dim()));
    m.right.assign(a.dim(), std::vector<Combination>(m.dim()));
    for (std::size_t i = 0; i < a.dim(); ++i) {
        m.left[i][0] = {{i + 1, a.one()}};
        m.right[i][0] = {{i + 1, a.one()}};
        for (std::size_t s = 0; s < a.dim(); ++s) {
            for (const auto& [k, v] : a.product(i, s)) m.left[i][s + 1].emplace(k + 1, v);
            for (const auto& [k, v] : a.product(s, i)) m.right[i][s + 1].emplace(k + 1, v);
        }
    }
    return m;
}

/// The ground field with both actions through the augmentation.
inline Bimodule trivial_bimodule(const FDGA& a) {
    Bimodule m;
    m.kind = "trivial";
    m.field = a.field;
    m.basis.add("1", 0);
    m.differential.resize(1);
    m.left.assign(a.dim(), std::vector<Combination>(1));
    m.right.assign(a.dim(), std::vector<Combination>(1));
    return m;
}

/// Linear dual of A with <f.x.g ; h> = (-1)^{|f|} <x ; g h f> and
/// <dx, y> = -(-1)^{|x|} <x, dy>. Basis element 0 is the dual of the unit.
inline Bimodule dual_bimodule(const FDGA& a) {
    Bimodule m;
    m.kind = "dual";
    m.field = a.field;
    m.basis.add("1*", 0);
    for (std::size_t i = 0; i < a.dim(); ++i) m.basis.add(a.basis.label(i) + "*", a.upper(i));
    const std::size_t n = m.dim();
    // Coefficient of full-basis element s in the product of full-basis elements (0 = unit).
    auto full_product = [&](std::size_t x, std::size_t y) {
        Combination out;
        if (x == 0) {
            out.emplace(y, a.one());
        } else if (y == 0) {
            out.emplace(x, a.one());
        } else {
            for (const auto& [k, v] : a.product(x - 1, y - 1)) out.emplace(k + 1, v);
        }
        return out;
    };
    m.left.assign(a.dim(), std::vector<Combination>(n));
    m.right.assign(a.dim(), std::vector<Combination>(n));
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Scalar sgn = a.sign(a.upper(i));
        for (std::size_t t = 0; t < n; ++t) {
            // e_i . s* = sgn * sum_t coeff_s(e_t e_i) t*
            for (const auto& [s, v] : full_product(t, i + 1)) accumulate(m.left[i][s], t, v * sgn);
            // s* . e_i = sum_t coeff_s(e_i e_t) t*
            for (const auto& [s, v] : full_product(i + 1, t)) accumulate(m.right[i][s], t, v);
        }
    }
    m.differential.resize(n);
    for (std::size_t t = 1; t < n; ++t)
        for (const auto& [j, v] : a.d(t - 1)) {
            std::size_t s = j + 1;
            accumulate(m.differential[s], t, -(v * a.sign(m.lower(s))));
        }
    return m;
}

/// Lists every violated bimodule axiom; empty means valid.
inline std::vector<std::string> validate_bimodule(const FDGA& a, const Bimodule& m) {
    std::vector<std::string> out;
    const std::size_t n = m.dim();
    if (m.left.size() != a.dim() || m.right.size() != a.dim() || m.differential.size() != n)
        return {"action tables have the wrong shape"};
    auto L = [&](std::size_t i) { return a.basis.label(i); };
    auto N = [&](std::size_t s) { return m.basis.label(s); };
    for (std::size_t s = 0; s < n; ++s) {
        Combination x{{s, a.one()}};
        for (std::size_t i = 0; i < a.dim(); ++i) {
            for (const auto& [t, v] : m.left[i][s])
                if (m.lower(t) != m.lower(s) + a.basis.degree(i))
                    out.push_back("degree: " + L(i) + "." + N(s) + " hits " + N(t));
            for (const auto& [t, v] : m.right[i][s])
                if (m.lower(t) != m.lower(s) + a.basis.degree(i))
                    out.push_back("degree: " + N(s) + "." + L(i) + " hits " + N(t));
            for (std::size_t j = 0; j < a.dim(); ++j) {
                auto ei = a.element(i);
                auto ej = a.element(j);
                if (m.act_left(a, a.product(i, j), x) != m.act_left(i, m.act_left(j, x)))
                    out.push_back("left associativity: (" + L(i) + L(j) + ")" + N(s));
                if (m.act_right(a, x, a.product(i, j)) != m.act_right(m.act_right(x, i), j))
                    out.push_back("right associativity: " + N(s) + "(" + L(i) + L(j) + ")");
                if (m.act_right(m.act_left(i, x), j) != m.act_left(i, m.act_right(x, j)))
                    out.push_back("middle associativity: " + L(i) + N(s) + L(j));
                (void)ei;
                (void)ej;
            }
            // d(e x) = d(e) x + (-1)^{|e|} e d(x)
            Combination lhs = m.apply_d(m.act_left(i, x));
            Combination rhs = m.act_left(a, a.d(i), x);
            accumulate(rhs, m.act_left(i, m.apply_d(x)), a.sign(a.upper(i)));
            if (lhs != rhs) out.push_back("left Leibniz: d(" + L(i) + "." + N(s) + ")");
            // d(x e) = d(x) e + (-1)^{|x|} x d(e)
            lhs = m.apply_d(m.act_right(x, i));
            rhs = m.act_right(m.apply_d(x), i);
            accumulate(rhs, m.act_right(a, x, a.d(i)), a.sign(m.lower(s)));
            if (lhs != rhs) out.push_back("right Leibniz: d(" + N(s) + "." + L(i) + ")");
        }
        if (!m.apply_d(m.differential[s]).empty()) out.push_back("d^2 != 0 on " + N(s));
        for (const auto& [t, v] : m.differential[s])
            if (m.lower(t) != m.lower(s) - 1) out.push_back("degree: d(" + N(s) + ") hits " + N(t));
    }
    return out;
}

namespace detail {

// Full-basis product for a (index 0 = unit, k+1 = e_k).
inline Combination full_product(const FDGA& a, std::size_t x, std::size_t y) {
    Combination out;
    if (x == 0)
        out.emplace(y, a.one());
    else if (y == 0)
        out.emplace(x, a.one());
    else
        for (const auto& [k, v] : a.product(x - 1, y - 1)) out.emplace(k + 1, v);
    return out;
}

inline Combination full_d(const FDGA& a, std::size_t x) {
    Combination out;
    if (x == 0) return out;
    for (const auto& [k, v] : a.d(x - 1)) out.emplace(k + 1, v);
    return out;
}

inline int full_upper(const FDGA& a, std::size_t x) { return x == 0 ? 0 : a.upper(x - 1); }

inline std::vector<std::string> disambiguated_labels(const FDGA& a, const std::set<std::string>& clash,
                                                     const std::string& suffix) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        auto l = a.basis.label(i);
        out.push_back(clash.count(l) ? l + suffix : l);
    }
    return out;
}

inline FDGA tensor_with_labels(const FDGA& a, const std::vector<std::string>& la, const FDGA& b,
                               const std::vector<std::string>& lb) {
    if (a.field != b.field) throw FieldMismatch(a.field.to_string() + " vs " + b.field.to_string());
    FDGA t;
    t.name = a.name + "x" + b.name;
    t.field = a.field;
    t.formal_dimension = a.formal_dimension + b.formal_dimension;
    const std::size_t na = a.dim() + 1, nb = b.dim() + 1;
    // Full index pairs (x, y) with (0, 0) the unit.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> where;
    for (std::size_t x = 0; x < na; ++x)
        for (std::size_t y = 0; y < nb; ++y) {
            if (x == 0 && y == 0) continue;
            std::string label = x == 0 ? lb[y - 1] : y == 0 ? la[x - 1] : la[x - 1] + "*" + lb[y - 1];
            int lower = -(full_upper(a, x) + full_upper(b, y));
            where[{x, y}] = t.basis.add(label, lower);
        }
    auto to_reduced = [&](std::size_t x, std::size_t y) { return where.at({x, y}); };
    t.differential.resize(t.dim());
    for (const auto& [xy, idx] : where) {
        auto [x, y] = xy;
        Combination dd;
        for (const auto& [x2, v] : full_d(a, x)) accumulate(dd, to_reduced(x2, y), v);
        Scalar sg = a.sign(full_upper(a, x));
        for (const auto& [y2, v] : full_d(b, y)) accumulate(dd, to_reduced(x, y2), v * sg);
        t.differential[idx] = std::move(dd);
    }
    for (const auto& [xy, i] : where)
        for (const auto& [xy2, j] : where) {
            auto [x, y] = xy;
            auto [x2, y2] = xy2;
            Scalar sg = a.sign(static_cast<long>(full_upper(b, y)) * full_upper(a, x2));
            Combination c;
            for (const auto& [px, u] : full_product(a, x, x2))
                for (const auto& [py, v] : full_product(b, y, y2)) {
                    if (px == 0 && py == 0) continue;  // cannot happen in positive degrees
                    accumulate(c, to_reduced(px, py), u * v * sg);
                }
            if (!c.empty()) t.products[{i, j}] = std::move(c);
        }
    return canonicalize(t);
}

}  // namespace detail

/// Graded tensor product with the Koszul sign (x(x)y)(x'(x)y') = (-1)^{|y||x'|} xx'(x)yy'.
inline FDGA tensor_product(const FDGA& a, const FDGA& b) {
    std::set<std::string> la, lb, clash;
    for (const auto& e : a.basis.entries()) la.insert(e.label);
    for (const auto& e : b.basis.entries())
        if (la.count(e.label)) clash.insert(e.label);
    return detail::tensor_with_labels(a, detail::disambiguated_labels(a, clash, "_1"), b,
                                      detail::disambiguated_labels(b, clash, "_2"));
}

/// Tensor product of several factors; clashing labels get the factor number
/// as a suffix.
inline FDGA tensor_product(const std::vector<FDGA>& factors) {
    if (factors.empty()) throw ConstructionError(ConstructionError::Kind::invalid_argument, "empty product");
    std::map<std::string, int> count;
    for (const auto& f : factors)
        for (const auto& e : f.basis.entries()) ++count[e.label];
    std::set<std::string> clash;
    for (const auto& [l, c] : count)
        if (c > 1) clash.insert(l);
    FDGA acc = factors.front();
    std::vector<std::string> acc_labels = detail::disambiguated_labels(acc, clash, "_1");
    {
        FDGA relabeled;
        relabeled.name = acc.name;
        relabeled.field = acc.field;
        relabeled.formal_dimension = acc.formal_dimension;
        for (std::size_t i = 0; i < acc.dim(); ++i) relabeled.basis.add(acc_labels[i], acc.basis.degree(i));
        relabeled.products = acc.products;
        relabeled.differential = acc.differential;
        relabeled.differential.resize(acc.dim());
        acc = canonicalize(relabeled);
    }
    for (std::size_t f = 1; f < factors.size(); ++f) {
        std::vector<std::string> la;
        for (std::size_t i = 0; i < acc.dim(); ++i) la.push_back(acc.basis.label(i));
        acc = detail::tensor_with_labels(acc, la, factors[f],
                                         detail::disambiguated_labels(factors[f], clash, "_" + std::to_string(f + 1)));
    }
    return acc;
}

inline int top_class(const FDGA& a) {
    int found = -1;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (a.upper(i) == a.formal_dimension) {
            if (found >= 0) return -2;
            found = static_cast<int>(i);
        }
    return found;
}

/// Cohomology ring of a connected sum of two formal Poincare duality
/// algebras of the same dimension.
inline FDGA connected_sum(const FDGA& a, const FDGA& b) {
    using K = ConstructionError::Kind;
    if (a.field != b.field) throw FieldMismatch(a.field.to_string() + " vs " + b.field.to_string());
    if (a.formal_dimension != b.formal_dimension)
        throw ConstructionError(K::dimension_mismatch, "connected sum needs equal dimensions, got " +
                                                           std::to_string(a.formal_dimension) + " and " +
                                                           std::to_string(b.formal_dimension));
    if (a.formal_dimension < 3)
        throw ConstructionError(K::dimension_too_small, "connected sum needs dimension >= 3");
    for (const FDGA* x : {&a, &b}) {
        if (!x->has_zero_differential())
            throw ConstructionError(K::nonzero_differential, x->name + " has a nonzero differential");
        auto rep = validate_fdga(*x);
        if (!rep.valid()) throw ConstructionError(K::invalid_argument, x->name + " is not a valid FDGA");
        if (!rep.commutative) throw ConstructionError(K::not_commutative, x->name + " is not graded commutative");
        if (!rep.poincare || top_class(*x) < 0)
            throw ConstructionError(K::not_poincare, x->name + " does not satisfy Poincare duality");
    }
    const int d = a.formal_dimension;
    std::set<std::string> la, clash;
    for (const auto& e : a.basis.entries()) la.insert(e.label);
    for (const auto& e : b.basis.entries())
        if (la.count(e.label)) clash.insert(e.label);
    FDGA s;
    s.name = a.name + "#" + b.name;
    s.field = a.field;
    s.formal_dimension = d;
    std::string omega = "omega";
    while (la.count(omega) || b.basis.find(omega)) omega += "'";
    std::vector<std::size_t> map_a(a.dim()), map_b(b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (a.upper(i) < d) map_a[i] = s.basis.add(clash.count(a.basis.label(i)) ? "l_" + a.basis.label(i) : a.basis.label(i), a.basis.degree(i));
    for (std::size_t i = 0; i < b.dim(); ++i)
        if (b.upper(i) < d) map_b[i] = s.basis.add(clash.count(b.basis.label(i)) ? "r_" + b.basis.label(i) : b.basis.label(i), b.basis.degree(i));
    std::size_t w = s.basis.add(omega, -d);
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (a.upper(i) == d) map_a[i] = w;
    for (std::size_t i = 0; i < b.dim(); ++i)
        if (b.upper(i) == d) map_b[i] = w;
    s.differential.resize(s.dim());
    auto copy_products = [&](const FDGA& x, const std::vector<std::size_t>& m) {
        for (const auto& [key, c] : x.products) {
            if (x.upper(key.first) == d || x.upper(key.second) == d) continue;
            Combination out;
            for (const auto& [k, v] : c) accumulate(out, m[k], v);
            if (!out.empty()) s.products[{m[key.first], m[key.second]}] = std::move(out);
        }
    };
    copy_products(a, map_a);
    copy_products(b, map_b);
    return canonicalize(s);
}

inline FDGA sphere(int n, const FieldSpec& field, const std::string& label = "u") {
    if (n < 2) throw ConstructionError(ConstructionError::Kind::invalid_argument, "sphere dimension must be >= 2");
    FDGA s;
    s.name = "S" + std::to_string(n);
    s.field = field;
    s.formal_dimension = n;
    s.basis.add(label, -n);
    s.differential.resize(1);
    return s;
}

/// k[x]/(x^{n+1}) with |x| = 2.
inline FDGA complex_projective(int n, const FieldSpec& field) {
    if (n < 1) throw ConstructionError(ConstructionError::Kind::invalid_argument, "CP^n needs n >= 1");
    FDGA c;
    c.name = "CP" + std::to_string(n);
    c.field = field;
    c.formal_dimension = 2 * n;
    for (int k = 1; k <= n; ++k) c.basis.add(k == 1 ? "x" : "x^" + std::to_string(k), -2 * k);
    c.differential.resize(c.dim());
    for (int i = 1; i <= n; ++i)
        for (int j = 1; i + j <= n; ++j)
            c.products[{static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)}] = {
                {static_cast<std::size_t>(i + j - 1), c.one()}};
    return c;
}

/// (S^3 x S^3 x S^3) # (S^3 x S^3 x S^3) with generators a, b, c and e, f, g.
inline FDGA connected_sum_example(const FieldSpec& field) {
    auto left = tensor_product(std::vector<FDGA>{sphere(3, field, "a"), sphere(3, field, "b"), sphere(3, field, "c")});
    auto right = tensor_product(std::vector<FDGA>{sphere(3, field, "e"), sphere(3, field, "f"), sphere(3, field, "g")});
    auto s = connected_sum(left, right);
    s.name = "(S3xS3xS3)#(S3xS3xS3)";
    return s;
}

namespace detail {

inline std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline int parse_int_arg(const std::string& s, const std::string& whole) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ConstructionError(ConstructionError::Kind::unknown_example, "unknown example '" + whole + "'");
    return std::stoi(s);
}

// Splits "a,b(c,d),e" at top-level commas.
inline std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace detail

/// Names: sphere:N | sphere(N) | cp:N | cp(N) | product(X,Y,...) |
/// connected-sum-s3x3 | connected_sum_example.
inline FDGA builtin_example(const std::string& raw, const FieldSpec& field) {
    using K = ConstructionError::Kind;
    const std::string name = detail::trim(raw);
    auto call = [&](const std::string& head, std::string& arg) {
        if (name.rfind(head + ":", 0) == 0) {
            arg = name.substr(head.size() + 1);
            return true;
        }
        if (name.rfind(head + "(", 0) == 0 && name.back() == ')') {
            arg = name.substr(head.size() + 1, name.size() - head.size() - 2);
            return true;
        }
        return false;
    };
    std::string arg;
    if (name == "connected-sum-s3x3" || name == "connected_sum_example") return connected_sum_example(field);
    if (call("sphere", arg)) {
        int n = detail::parse_int_arg(arg, name);
        if (n < 2) throw ConstructionError(K::unknown_example, "sphere dimension must be >= 2 in '" + name + "'");
        return sphere(n, field);
    }
    if (call("cp", arg)) {
        int n = detail::parse_int_arg(arg, name);
        if (n < 1) throw ConstructionError(K::unknown_example, "cp needs n >= 1 in '" + name + "'");
        return complex_projective(n, field);
    }
    if (name.rfind("product(", 0) == 0 && name.back() == ')') {
        std::vector<FDGA> factors;
        for (const auto& part : detail::split_args(name.substr(8, name.size() - 9)))
            factors.push_back(builtin_example(part, field));
        auto t = tensor_product(factors);
        t.name = name;
        return t;
    }
    throw ConstructionError(K::unknown_example, "unknown example '" + name + "'");
}

inline std::vector<std::string> builtin_names() {
    return {"sphere:N", "cp:N", "product(X,Y,...)", "connected-sum-s3x3"};
}

/// Cohomology algebra with zero differential (positive-degree classes only).
inline FDGA cohomology_algebra(const FDGA& a) {
    auto h = cohomology(a);
    FDGA out;
    out.name = "H(" + a.name + ")";
    out.field = a.field;
    out.formal_dimension = a.formal_dimension;
    std::vector<std::pair<int, const Combination*>> reps;
    for (const auto& [p, list] : h.representatives)
        for (std::size_t k = 0; k < list.size(); ++k) {
            out.basis.add("h" + std::to_string(p) + "_" + std::to_string(k), -p);
            reps.push_back({p, &list[k]});
        }
    out.differential.resize(out.dim());
    std::map<int, std::size_t> offset;
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (!offset.count(reps[i].first)) offset[reps[i].first] = i;
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = 0; j < reps.size(); ++j) {
            int p = reps[i].first + reps[j].first;
            auto prod = a.multiply(*reps[i].second, *reps[j].second);
            if (prod.empty() || !offset.count(p)) continue;
            auto coords = h.project(p, prod);
            Combination c;
            for (std::size_t k = 0; k < coords.size(); ++k) accumulate(c, offset[p] + k, coords[k]);
            if (!c.empty()) out.products[{i, j}] = std::move(c);
        }
    return out;
}

}  // namespace loopalg
