#pragma once

#include <string>
#include <vector>

#include "loopalg/cobar.hpp"
#include "loopalg/complex.hpp"

namespace loopalg {

/// Windowed slices of (T(W), d) in degrees [0, max_degree); slices up to
/// max_degree are built on demand. Cells are bare words.
template <class F>
class OmegaWindow {
public:
    using V = typename F::value_type;
    using Terms = typename ChainWindow<F>::Terms;

    OmegaWindow(const CobarAlgebra& c, F field, int max_degree)
        : cobar_(c), field_(field), typed_(field, c), max_degree_(max_degree), window_(field, make_source()) {
        if (c.field != field.spec()) throw FieldMismatch(c.field.to_string() + " vs " + field.spec().to_string());
        if (max_degree < 1) throw ShapeError("omega window needs max_degree >= 1");
    }

    OmegaWindow(const OmegaWindow&) = delete;
    OmegaWindow& operator=(const OmegaWindow&) = delete;

    const CobarAlgebra& cobar() const { return cobar_; }
    const F& field() const { return field_; }
    int min_degree() const { return 0; }
    int bottom_degree() const { return 0; }
    int max_degree() const { return max_degree_; }
    ChainWindow<F>& chains() { return window_; }
    bool reported(int degree) const { return degree >= 0 && degree < max_degree_; }

    void require_in_window(int degree) const {
        if (!reported(degree))
            throw WindowExceeded("degree " + std::to_string(degree) + " outside window [0, " +
                                 std::to_string(max_degree_) + ")");
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
    void check_d_squared() {
        for (int n = 1; n <= max_degree_; ++n) window_.check_d_squared(n);
    }

    int cell_degree(const Cell& w) const { return typed_.word_degree(w); }

    Terms differential(const Terms& chain) const { return window_.apply_differential(chain); }

    Terms multiply(const Terms& x, const Terms& y) const {
        Terms raw;
        for (const auto& [u, a] : x)
            for (const auto& [v, b] : y) raw.push_back({u + v, field_.mul(a, b)});
        return window_.consolidate(raw);
    }

    Terms unit() const { return {{Word{}, field_.one()}}; }

    std::string cell_label(const Cell& w) const { return power_label(cobar_, w); }

private:
    typename ChainWindow<F>::Source make_source() {
        typename ChainWindow<F>::Source src;
        src.split = !cobar_.has_linear_part();
        src.cells = [this](int degree, int length) {
            if (degree < -1 || degree > max_degree_)
                throw WindowExceeded("slice " + std::to_string(degree) + " outside the built window");
            return enumerate_words(typed_.degree, degree, length);
        };
        src.boundary = [this](const Cell& w, const V& c, Terms& out) {
            std::vector<std::pair<Word, V>> terms;
            typed_.differential(w, c, terms);
            for (auto& t : terms) out.push_back(std::move(t));
        };
        src.length = [](const Cell& w) { return static_cast<int>(w.size()); };
        src.max_length = [this](int degree) {
            int mg = cobar_.min_generator_degree();
            return mg == 0 ? 0 : std::max(0, degree / mg);
        };
        return src;
    }

    CobarAlgebra cobar_;
    F field_;
    TypedCobar<F> typed_;
    int max_degree_;
    ChainWindow<F> window_;
};

}  // namespace loopalg
