#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loopalg/cobar.hpp"
#include "loopalg/complex.hpp"
#include "loopalg/dga.hpp"

namespace loopalg {

// Cells of N (x) T(W): byte 0 is the module basis index, the rest is the word.
inline Cell make_cell(std::size_t s, const Word& w) {
    Cell c(1, as_letter(s));
    c += w;
    return c;
}
inline std::size_t cell_module(const Cell& c) { return static_cast<unsigned char>(c[0]); }
inline Word cell_word(const Cell& c) { return c.substr(1); }

/// Typed tables of a bimodule.
template <class F>
struct TypedBimodule {
    using V = typename F::value_type;
    using Row = std::vector<std::pair<std::uint32_t, V>>;
    std::vector<int> lower;
    std::vector<Row> d;
    std::vector<std::vector<Row>> left, right;  // [generator][module element]

    TypedBimodule(const F& f, const Bimodule& m) {
        auto conv = [&](const Combination& c) {
            Row r;
            for (const auto& [k, v] : c) r.push_back({static_cast<std::uint32_t>(k), v.to(f)});
            return r;
        };
        for (std::size_t s = 0; s < m.dim(); ++s) {
            lower.push_back(m.lower(s));
            d.push_back(conv(m.differential[s]));
        }
        left.resize(m.left.size());
        right.resize(m.right.size());
        for (std::size_t j = 0; j < m.left.size(); ++j)
            for (std::size_t s = 0; s < m.dim(); ++s) {
                left[j].push_back(conv(m.left[j][s]));
                right[j].push_back(conv(m.right[j][s]));
            }
    }
};

/// Windowed Hochschild complex C*(A; N) = N (x) T(W) in lower grading, with
///   D(n(x)b) = d(n)(x)b + (-1)^{|n|} n(x)db
///            + sum_j (-1)^{|n|+|e_j|+|w_j||b|} (n e_j)(x)(b w_j)
///            - sum_j (-1)^{|n|+|e_j|+|n||e_j|} (e_j n)(x)(w_j b).
/// For N = A this is the loop model (A (x) T(W), D). The window reports
/// homology in degrees [min_degree, max_degree); slices from min_degree - 1
/// to max_degree are built on demand.
template <class F>
class HochschildWindow {
public:
    using V = typename F::value_type;
    using Terms = typename ChainWindow<F>::Terms;

    HochschildWindow(const FDGA& a, const Bimodule& n, F field, int min_degree, int max_degree)
        : algebra_(a),
          module_(n),
          cobar_(build_cobar(a)),
          field_(field),
          tcobar_(field, cobar_),
          tmod_(field, n),
          min_degree_(min_degree),
          max_degree_(max_degree),
          window_(field, make_source()) {
        if (a.field != field.spec() || n.field != a.field)
            throw FieldMismatch(a.field.to_string() + " vs " + field.spec().to_string());
        if (max_degree < min_degree) throw ShapeError("empty degree window");
        if (n.dim() > 255) throw NotSupported("bimodule with more than 255 basis elements");
        auto problems = validate_bimodule(a, n);
        if (!problems.empty()) throw BimoduleError(problems.front());
        if (n.kind == "self") {
            for (std::size_t s = 0; s <= a.dim(); ++s)
                for (std::size_t t = 0; t <= a.dim(); ++t) {
                    Row r;
                    if (s == 0 && t == 0)
                        r.push_back({0, field.one()});
                    else
                        for (const auto& [k, v] : detail::full_product(a, s, t)) r.push_back({static_cast<std::uint32_t>(k), v.to(field)});
                    full_product_.push_back(std::move(r));
                }
        }
    }

    HochschildWindow(const HochschildWindow&) = delete;
    HochschildWindow& operator=(const HochschildWindow&) = delete;

    const FDGA& algebra() const { return algebra_; }
    const Bimodule& module() const { return module_; }
    const CobarAlgebra& cobar() const { return cobar_; }
    const F& field() const { return field_; }
    int min_degree() const { return min_degree_; }
    int max_degree() const { return max_degree_; }
    bool weight_split() const { return split_; }
    ChainWindow<F>& chains() { return window_; }

    bool reported(int degree) const { return degree >= min_degree_ && degree < max_degree_; }
    std::vector<int> partial_degrees() const { return {min_degree_ - 1, max_degree_}; }

    /// Lowest degree with a nonzero slice.
    int bottom_degree() const {
        int m = 0;
        for (int l : tmod_.lower) m = std::min(m, l);
        return m;
    }

    void require_in_window(int degree) const {
        if (!reported(degree))
            throw WindowExceeded("degree " + std::to_string(degree) + " outside window [" + std::to_string(min_degree_) +
                                 ", " + std::to_string(max_degree_) + ")");
    }

    std::size_t betti(int degree) {
        require_in_window(degree);
        return window_.betti(degree);
    }
    Terms representative(int degree, std::size_t k) {
        require_in_window(degree);
        return window_.representative(degree, k);
    }
    std::vector<V> project(int degree, const Terms& cycle) {
        require_in_window(degree);
        return window_.project(degree, cycle);
    }

    /// Checks D^2 = 0 on every built-able block in the window.
    void check_d_squared() {
        for (int n = min_degree_ + 1; n <= max_degree_; ++n) window_.check_d_squared(n);
    }

    int cell_degree(const Cell& c) const { return tmod_.lower[cell_module(c)] + tcobar_.word_degree(cell_word(c)); }

    /// Appends coeff * D(cell).
    void boundary(const Cell& cell, const V& coeff, Terms& out) const {
        const std::size_t s = cell_module(cell);
        const Word b = cell_word(cell);
        const int n = tmod_.lower[s];
        const int bdeg = tcobar_.word_degree(b);
        for (const auto& [t, v] : tmod_.d[s]) out.push_back({make_cell(t, b), field_.mul(coeff, v)});
        if (!b.empty()) {
            std::vector<std::pair<Word, V>> db;
            tcobar_.differential(b, n % 2 == 0 ? coeff : field_.neg(coeff), db);
            for (auto& [w, v] : db) out.push_back({make_cell(s, w), v});
        }
        for (std::size_t j = 0; j < algebra_.dim(); ++j) {
            const int ej = algebra_.upper(j);
            const int wj = tcobar_.degree[j];
            const V right_coeff = sign_of(n + ej + static_cast<long>(wj) * bdeg) > 0 ? coeff : field_.neg(coeff);
            for (const auto& [t, v] : tmod_.right[j][s]) {
                Word w = b;
                w += as_letter(j);
                out.push_back({make_cell(t, w), field_.mul(right_coeff, v)});
            }
            const V left_coeff = sign_of(n + ej + static_cast<long>(n) * ej) > 0 ? field_.neg(coeff) : coeff;
            for (const auto& [t, v] : tmod_.left[j][s]) {
                Word w(1, as_letter(j));
                w += b;
                out.push_back({make_cell(t, w), field_.mul(left_coeff, v)});
            }
        }
    }

    Terms differential(const Terms& chain) const { return window_.apply_differential(chain); }

    /// Product in A (x) T(W): (a(x)b)(a'(x)b') = (-1)^{|b||a'|} aa'(x)bb'.
    Terms multiply(const Terms& x, const Terms& y) const {
        if (full_product_.empty()) throw NotSupported("products need coefficients in A");
        const std::size_t na = algebra_.dim() + 1;
        Terms raw;
        for (const auto& [cx, vx] : x) {
            std::size_t s = cell_module(cx);
            Word b = cell_word(cx);
            int bdeg = tcobar_.word_degree(b);
            for (const auto& [cy, vy] : y) {
                std::size_t t = cell_module(cy);
                V c = field_.mul(vx, vy);
                if (sign_of(static_cast<long>(bdeg) * tmod_.lower[t]) < 0) c = field_.neg(c);
                Word bb = b + cell_word(cy);
                for (const auto& [k, v] : full_product_[s * na + t]) raw.push_back({make_cell(k, bb), field_.mul(c, v)});
            }
        }
        return window_.consolidate(raw);
    }

    Terms unit() const { return {{make_cell(0, Word{}), field_.one()}}; }

    std::string cell_label(const Cell& c) const {
        return module_.basis.label(cell_module(c)) + "⊗" + power_label(cobar_, cell_word(c));
    }

private:
    using Row = std::vector<std::pair<std::uint32_t, V>>;

    typename ChainWindow<F>::Source make_source() {
        split_ = algebra_.has_zero_differential() && module_.has_zero_differential();
        typename ChainWindow<F>::Source src;
        src.split = split_;
        src.cells = [this](int degree, int length) {
            if (degree < min_degree_ - 1 || degree > max_degree_)
                throw WindowExceeded("slice " + std::to_string(degree) + " outside the built window");
            std::vector<Cell> out;
            for (std::size_t s = 0; s < tmod_.lower.size(); ++s)
                for (const auto& w : enumerate_words(tcobar_.degree, degree - tmod_.lower[s], length))
                    out.push_back(make_cell(s, w));
            return out;
        };
        src.boundary = [this](const Cell& c, const V& v, Terms& out) { boundary(c, v, out); };
        src.length = [](const Cell& c) { return static_cast<int>(c.size()) - 1; };
        src.max_length = [this](int degree) {
            int low = 0;
            for (int l : tmod_.lower) low = std::min(low, l);
            int mg = cobar_.min_generator_degree();
            return mg == 0 ? 0 : std::max(0, (degree - low) / mg);
        };
        return src;
    }

    FDGA algebra_;
    Bimodule module_;
    CobarAlgebra cobar_;
    F field_;
    TypedCobar<F> tcobar_;
    TypedBimodule<F> tmod_;
    int min_degree_;
    int max_degree_;
    bool split_ = false;
    std::vector<Row> full_product_;
    ChainWindow<F> window_;
};

/// Element of A (x) T(W) with dynamic scalars; the cell's module byte is the
/// full index into A (0 = unit, i + 1 = e_i). Same type as WordChain.
using LoopChain = std::map<Cell, Scalar>;

inline LoopChain loop_multiply(const FDGA& a, const CobarAlgebra& c, const LoopChain& x, const LoopChain& y) {
    LoopChain out;
    for (const auto& [cx, vx] : x)
        for (const auto& [cy, vy] : y) {
            int bdeg = c.degree(cell_word(cx));
            int adeg = -detail::full_upper(a, cell_module(cy));
            Scalar k = vx * vy * a.sign(static_cast<long>(bdeg) * adeg);
            for (const auto& [m, v] : detail::full_product(a, cell_module(cx), cell_module(cy)))
                accumulate(out, make_cell(m, cell_word(cx) + cell_word(cy)), k * v);
        }
    return out;
}

/// The loop-model differential built from its values on generators,
///   D(a(x)1) = d(a)(x)1 + sum_j (-1)^{|a|+|e_j|} [a, e_j](x)w_j,
///   D(1(x)w) = 1(x)dw - sum_j (-1)^{|e_j|} e_j(x)[w_j, w],
/// extended as a derivation of A (x) T(W). With `commutative_shortcut` the
/// bracket terms in A are dropped, which is exact for graded-commutative A.
inline LoopChain loop_model_differential(const FDGA& a, const CobarAlgebra& c, const LoopChain& x,
                                         bool commutative_shortcut = false) {
    const std::size_t na = a.dim() + 1;
    auto unit_word = [&](const Word& w) { return LoopChain{{make_cell(0, w), a.one()}}; };
    std::vector<LoopChain> d_a(na), d_w(c.size());
    for (std::size_t s = 1; s < na; ++s) {
        LoopChain out;
        for (const auto& [k, v] : a.d(s - 1)) accumulate(out, make_cell(k + 1, Word{}), v);
        if (!commutative_shortcut)
            for (std::size_t j = 0; j < a.dim(); ++j) {
                Scalar sg = a.sign(a.upper(s - 1) + a.upper(j));
                Scalar swap = a.sign(static_cast<long>(a.upper(s - 1)) * a.upper(j));
                Word wj(1, as_letter(j));
                for (const auto& [k, v] : a.product(s - 1, j)) accumulate(out, make_cell(k + 1, wj), v * sg);
                for (const auto& [k, v] : a.product(j, s - 1)) accumulate(out, make_cell(k + 1, wj), -(v * sg * swap));
            }
        d_a[s] = std::move(out);
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
        LoopChain out;
        for (const auto& [w, v] : c.d_generator(i)) accumulate(out, make_cell(0, w), v);
        for (std::size_t j = 0; j < a.dim(); ++j) {
            Scalar sg = -a.sign(a.upper(j));
            Scalar swap = a.sign(static_cast<long>(c.degree(j)) * c.degree(i));
            accumulate(out, make_cell(j + 1, Word{as_letter(j), as_letter(i)}), sg);
            accumulate(out, make_cell(j + 1, Word{as_letter(i), as_letter(j)}), -(sg * swap));
        }
        d_w[i] = std::move(out);
    }
    LoopChain result;
    for (const auto& [cell, coeff] : x) {
        const std::size_t s = cell_module(cell);
        const Word b = cell_word(cell);
        LoopChain db;  // D(1 (x) b)
        int prefix = 0;
        for (std::size_t p = 0; p < b.size(); ++p) {
            std::size_t i = letter(b, p);
            auto term = loop_multiply(a, c, loop_multiply(a, c, unit_word(b.substr(0, p)), d_w[i]), unit_word(b.substr(p + 1)));
            for (const auto& [k, v] : term) accumulate(db, k, v * a.sign(prefix));
            prefix += c.degree(i);
        }
        LoopChain total;
        if (s == 0) {
            total = std::move(db);
        } else {
            LoopChain es{{make_cell(s, Word{}), a.one()}};
            for (const auto& [k, v] : loop_multiply(a, c, d_a[s], unit_word(b))) accumulate(total, k, v);
            for (const auto& [k, v] : loop_multiply(a, c, es, db)) accumulate(total, k, v * a.sign(a.upper(s - 1)));
        }
        for (const auto& [k, v] : total) accumulate(result, k, v * coeff);
    }
    return result;
}

/// Convenience constructor naming the coefficient kind.
enum class Coefficients { self, trivial, dual };

inline Bimodule coefficient_module(const FDGA& a, Coefficients k) {
    switch (k) {
        case Coefficients::self: return self_bimodule(a);
        case Coefficients::trivial: return trivial_bimodule(a);
        case Coefficients::dual: return dual_bimodule(a);
    }
    throw InternalError("unknown coefficient kind");
}

template <class F>
HochschildWindow<F> hochschild_complex(const FDGA& a, const Bimodule& n, const F& field, int min_degree,
                                       int max_degree) {
    return HochschildWindow<F>(a, n, field, min_degree, max_degree);
}

/// Asserts that the assembled differential agrees with the generator formulas
/// of the loop model on every generator 1(x)w_i and e_s(x)1.
template <class F>
void check_against_loop_model(HochschildWindow<F>& w) {
    const FDGA& a = w.algebra();
    const auto& c = w.cobar();
    const auto& f = w.field();
    auto compare = [&](const Cell& cell) {
        typename HochschildWindow<F>::Terms raw;
        w.boundary(cell, f.one(), raw);
        auto assembled = w.chains().consolidate(raw);
        auto expected = loop_model_differential(a, c, LoopChain{{cell, a.one()}});
        LoopChain got;
        for (const auto& [k, v] : assembled) accumulate(got, k, Scalar::from_value(f, v));
        if (got != expected) throw InternalError("assembled differential disagrees with the loop model on " + w.cell_label(cell));
    };
    for (std::size_t i = 0; i < c.size(); ++i) compare(make_cell(0, Word(1, as_letter(i))));
    for (std::size_t s = 1; s <= a.dim(); ++s) compare(make_cell(s, Word{}));
}

}  // namespace loopalg
