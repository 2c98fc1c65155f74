#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "loopalg/errors.hpp"
#include "loopalg/scalar.hpp"

namespace loopalg {

/// Ordered labelled basis of a graded vector space. The order is the one used
/// for every matrix built over it.
class GradedBasis {
public:
    struct Entry {
        std::string label;
        int degree;
    };

    GradedBasis() = default;
    explicit GradedBasis(std::vector<Entry> entries) {
        for (auto& e : entries) add(std::move(e.label), e.degree);
    }

    std::size_t add(std::string label, int degree) {
        if (index_.count(label)) throw ShapeError("duplicate basis label '" + label + "'");
        index_.emplace(label, entries_.size());
        entries_.push_back({std::move(label), degree});
        return entries_.size() - 1;
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const Entry& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<Entry>& entries() const { return entries_; }
    int degree(std::size_t i) const { return entries_[i].degree; }
    const std::string& label(std::size_t i) const { return entries_[i].label; }

    std::optional<std::size_t> find(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

using Index = std::uint32_t;

/// Sparse vector: strictly increasing indices, no stored zeros.
template <class F>
struct SparseVector {
    using value_type = typename F::value_type;
    struct Term {
        Index index;
        value_type value;
    };
    std::vector<Term> terms;

    bool empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }
    Index lead() const { return terms.front().index; }

    value_type at(const F& field, Index i) const {
        auto it = std::lower_bound(terms.begin(), terms.end(), i,
                                   [](const Term& t, Index k) { return t.index < k; });
        return (it != terms.end() && it->index == i) ? it->value : field.zero();
    }

    static SparseVector unit(const F& field, Index i) {
        SparseVector v;
        v.terms.push_back({i, field.one()});
        return v;
    }

    /// Builds from unsorted (index, value) pairs, summing duplicates.
    static SparseVector from_pairs(const F& field, std::vector<std::pair<Index, value_type>> pairs) {
        std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseVector v;
        for (auto& [i, x] : pairs) {
            if (!v.terms.empty() && v.terms.back().index == i)
                v.terms.back().value = field.add(v.terms.back().value, x);
            else
                v.terms.push_back({i, std::move(x)});
        }
        std::erase_if(v.terms, [&](const Term& t) { return field.is_zero(t.value); });
        return v;
    }

    bool equals(const F& field, const SparseVector& o) const {
        if (terms.size() != o.terms.size()) return false;
        for (std::size_t k = 0; k < terms.size(); ++k)
            if (terms[k].index != o.terms[k].index || !field.equal(terms[k].value, o.terms[k].value))
                return false;
        return true;
    }
};

/// y += a * x
template <class F>
void axpy(const F& field, const typename F::value_type& a, const SparseVector<F>& x, SparseVector<F>& y) {
    if (field.is_zero(a) || x.empty()) return;
    std::vector<typename SparseVector<F>::Term> out;
    out.reserve(x.size() + y.size());
    auto ix = x.terms.begin();
    auto iy = y.terms.begin();
    while (ix != x.terms.end() || iy != y.terms.end()) {
        if (iy == y.terms.end() || (ix != x.terms.end() && ix->index < iy->index)) {
            out.push_back({ix->index, field.mul(a, ix->value)});
            ++ix;
        } else if (ix == x.terms.end() || iy->index < ix->index) {
            out.push_back(std::move(*iy));
            ++iy;
        } else {
            auto v = field.add(iy->value, field.mul(a, ix->value));
            if (!field.is_zero(v)) out.push_back({ix->index, std::move(v)});
            ++ix;
            ++iy;
        }
    }
    y.terms = std::move(out);
}

template <class F>
void scale(const F& field, const typename F::value_type& a, SparseVector<F>& v) {
    if (field.is_zero(a)) {
        v.terms.clear();
        return;
    }
    for (auto& t : v.terms) t.value = field.mul(a, t.value);
}

/// Column-major sparse matrix.
template <class F>
struct SparseMatrix {
    using value_type = typename F::value_type;

    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SparseVector<F>> columns;

    SparseMatrix() = default;
    SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

    static SparseMatrix identity(const F& field, std::size_t n) {
        SparseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.columns[i] = SparseVector<F>::unit(field, static_cast<Index>(i));
        return m;
    }

    static SparseMatrix from_dense(const F& field, const std::vector<std::vector<long>>& rows_data) {
        std::size_t r = rows_data.size();
        std::size_t c = r ? rows_data.front().size() : 0;
        SparseMatrix m(r, c);
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t i = 0; i < r; ++i)
                if (auto v = field.from_int(rows_data[i][j]); !field.is_zero(v))
                    m.columns[j].terms.push_back({static_cast<Index>(i), std::move(v)});
        return m;
    }

    value_type at(const F& field, std::size_t i, std::size_t j) const {
        return columns[j].at(field, static_cast<Index>(i));
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& c : columns) n += c.size();
        return n;
    }

    bool is_zero() const {
        return std::all_of(columns.begin(), columns.end(), [](const auto& c) { return c.empty(); });
    }

    struct Entry {
        std::size_t row, col;
        value_type value;
    };
    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        for (std::size_t j = 0; j < cols; ++j)
            for (const auto& t : columns[j].terms) out.push_back({t.index, j, t.value});
        return out;
    }
};

template <class F>
SparseVector<F> apply(const F& field, const SparseMatrix<F>& m, const SparseVector<F>& x) {
    if (!x.empty() && x.terms.back().index >= m.cols) throw ShapeError("vector index outside matrix columns");
    SparseVector<F> y;
    for (const auto& t : x.terms) axpy(field, t.value, m.columns[t.index], y);
    return y;
}

template <class F>
SparseMatrix<F> multiply(const F& field, const SparseMatrix<F>& a, const SparseMatrix<F>& b) {
    if (a.cols != b.rows)
        throw ShapeError("cannot multiply " + std::to_string(a.rows) + "x" + std::to_string(a.cols) + " by " +
                         std::to_string(b.rows) + "x" + std::to_string(b.cols));
    SparseMatrix<F> c(a.rows, b.cols);
    for (std::size_t j = 0; j < b.cols; ++j) c.columns[j] = apply(field, a, b.columns[j]);
    return c;
}

template <class F>
struct RowReduction {
    std::size_t rank = 0;
    SparseMatrix<F> reduced;       // reduced row-echelon form of the input
    SparseMatrix<F> basis_change;  // basis_change * input == reduced
    std::vector<std::size_t> pivot_columns;
};

/// Gauss-Jordan elimination. Pivot rule: columns are scanned left to right and
/// the first not-yet-used row with a nonzero entry becomes the pivot row.
template <class F>
RowReduction<F> row_reduce(const F& field, const SparseMatrix<F>& m) {
    using Vec = SparseVector<F>;
    // Work on rows: each row is [m-row | identity-row], the identity part is
    // shifted by m.cols.
    const std::size_t n = m.cols;
    std::vector<std::vector<std::pair<Index, typename F::value_type>>> pairs(m.rows);
    for (std::size_t j = 0; j < m.cols; ++j)
        for (const auto& t : m.columns[j].terms) pairs[t.index].push_back({static_cast<Index>(j), t.value});
    std::vector<Vec> rows(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        pairs[i].push_back({static_cast<Index>(n + i), field.one()});
        rows[i] = Vec::from_pairs(field, std::move(pairs[i]));
    }

    RowReduction<F> out;
    std::size_t next = 0;
    for (std::size_t col = 0; col < n && next < m.rows; ++col) {
        std::size_t piv = m.rows;
        for (std::size_t i = next; i < m.rows; ++i)
            if (!field.is_zero(rows[i].at(field, static_cast<Index>(col)))) {
                piv = i;
                break;
            }
        if (piv == m.rows) continue;
        std::swap(rows[next], rows[piv]);
        scale(field, field.inv(rows[next].at(field, static_cast<Index>(col))), rows[next]);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == next) continue;
            auto c = rows[i].at(field, static_cast<Index>(col));
            if (!field.is_zero(c)) axpy(field, field.neg(c), rows[next], rows[i]);
        }
        out.pivot_columns.push_back(col);
        ++next;
    }
    out.rank = next;
    out.reduced = SparseMatrix<F>(m.rows, m.cols);
    out.basis_change = SparseMatrix<F>(m.rows, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (const auto& t : rows[i].terms) {
            if (t.index < n)
                out.reduced.columns[t.index].terms.push_back({static_cast<Index>(i), t.value});
            else
                out.basis_change.columns[t.index - n].terms.push_back({static_cast<Index>(i), t.value});
        }
    return out;
}

/// Incremental column reduction. Each stored vector has a distinct leading
/// index (its smallest index) with coefficient 1. Optionally tracks, for every
/// stored vector, its expression in the original inputs.
template <class F>
class ColumnReducer {
public:
    using Vec = SparseVector<F>;
    using value_type = typename F::value_type;

    explicit ColumnReducer(const F& field, bool track = false) : field_(field), track_(track) {}

    struct Result {
        bool independent;
        std::size_t slot;  // slot of the new pivot vector when independent
        Vec combination;   // when tracked: input combination that reduced to zero / to the stored vector
    };

    /// Reduces v against stored pivots; if a nonzero remainder is left it is
    /// stored as a new pivot. `tag` is returned for the stored vector by
    /// reduce_coefficients.
    Result insert(Vec v, Vec combination = {}, long tag = -1) {
        reduce_lead(v, combination);
        if (v.empty()) return {false, 0, std::move(combination)};
        auto inv = field_.inv(v.terms.front().value);
        scale(field_, inv, v);
        if (track_) scale(field_, inv, combination);
        std::size_t slot = vectors_.size();
        pivot_.emplace(v.lead(), slot);
        vectors_.push_back(std::move(v));
        tags_.push_back(tag);
        if (track_) combos_.push_back(combination);
        return {true, slot, std::move(combination)};
    }

    /// Fully reduces v and returns the coefficient attached to each tag seen
    /// during the reduction together with the remainder (empty iff v lies in
    /// the span of the stored vectors).
    std::pair<std::vector<std::pair<long, value_type>>, Vec> reduce_coefficients(Vec v) const {
        std::vector<std::pair<long, value_type>> coeffs;
        Vec rest;
        while (!v.empty()) {
            auto it = pivot_.find(v.lead());
            if (it == pivot_.end()) {
                rest.terms.push_back(v.terms.front());
                v.terms.erase(v.terms.begin());
                continue;
            }
            auto c = v.terms.front().value;
            if (tags_[it->second] >= 0) coeffs.push_back({tags_[it->second], c});
            axpy(field_, field_.neg(c), vectors_[it->second], v);
        }
        return {std::move(coeffs), std::move(rest)};
    }

    bool contains(const Vec& v) const { return reduce_coefficients(v).second.empty(); }

    std::size_t rank() const { return vectors_.size(); }
    const Vec& vector(std::size_t slot) const { return vectors_[slot]; }
    const Vec& combination(std::size_t slot) const { return combos_[slot]; }
    bool is_pivot(Index i) const { return pivot_.count(i) > 0; }

private:
    void reduce_lead(Vec& v, Vec& combination) const {
        while (!v.empty()) {
            auto it = pivot_.find(v.lead());
            if (it == pivot_.end()) return;
            auto c = field_.neg(v.terms.front().value);
            axpy(field_, c, vectors_[it->second], v);
            if (track_) axpy(field_, c, combos_[it->second], combination);
        }
    }

    F field_;
    bool track_;
    std::vector<Vec> vectors_;
    std::vector<Vec> combos_;
    std::vector<long> tags_;
    std::unordered_map<Index, std::size_t> pivot_;
};

/// Kernel basis of m (columns of the result span ker m). Dependent columns
/// produce kernel vectors in left-to-right order.
template <class F>
std::vector<SparseVector<F>> kernel_basis(const F& field, const SparseMatrix<F>& m) {
    std::vector<SparseVector<F>> out;
    if (m.is_zero()) {
        for (std::size_t j = 0; j < m.cols; ++j) out.push_back(SparseVector<F>::unit(field, static_cast<Index>(j)));
        return out;
    }
    ColumnReducer<F> red(field, true);
    for (std::size_t j = 0; j < m.cols; ++j) {
        auto r = red.insert(m.columns[j], SparseVector<F>::unit(field, static_cast<Index>(j)));
        if (!r.independent) out.push_back(std::move(r.combination));
    }
    return out;
}

/// Kernel basis in echelon form: distinct smallest indices, each with
/// coefficient 1. Columns are reduced right to left, so the combination for
/// column j is e_j plus later columns.
template <class F>
std::vector<SparseVector<F>> kernel_echelon_basis(const F& field, const SparseMatrix<F>& m) {
    std::vector<SparseVector<F>> out;
    ColumnReducer<F> red(field, !m.is_zero());
    for (std::size_t j = m.cols; j-- > 0;) {
        auto r = red.insert(m.columns[j], SparseVector<F>::unit(field, static_cast<Index>(j)));
        if (!r.independent) out.push_back(std::move(r.combination));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

template <class F>
std::size_t rank_of(const F& field, const SparseMatrix<F>& m) {
    ColumnReducer<F> red(field);
    for (const auto& c : m.columns) red.insert(c);
    return red.rank();
}

/// Solves m x = b. The solution has zeros at all free variables (columns that
/// depend on earlier columns), matching the reduced echelon solution.
template <class F>
std::optional<SparseVector<F>> solve_linear(const F& field, const SparseMatrix<F>& m, const SparseVector<F>& b) {
    if (!b.empty() && b.terms.back().index >= m.rows) throw ShapeError("right-hand side longer than matrix rows");
    ColumnReducer<F> red(field, true);
    std::unordered_map<long, std::size_t> slot_of;
    for (std::size_t j = 0; j < m.cols; ++j) {
        auto r = red.insert(m.columns[j], SparseVector<F>::unit(field, static_cast<Index>(j)), static_cast<long>(j));
        if (r.independent) slot_of[static_cast<long>(j)] = r.slot;
    }
    auto [coeffs, rest] = red.reduce_coefficients(b);
    if (!rest.empty()) return std::nullopt;
    // Stored vector s equals m * combination(s), supported on pivot columns.
    SparseVector<F> x;
    for (const auto& [tag, c] : coeffs) axpy(field, c, red.combination(slot_of.at(tag)), x);
    return x;
}

/// Homology of  (slice n+1) --d_in--> (slice n) --d_out--> (slice n-1).
template <class F>
class HomologySlice {
public:
    using Vec = SparseVector<F>;
    using value_type = typename F::value_type;

    HomologySlice(const F& field, int degree, std::size_t dim) : degree_(degree), dim_(dim), reducer_(field) {}

    int degree() const { return degree_; }
    std::size_t dimension() const { return dim_; }
    std::size_t betti() const { return representatives_.size(); }
    const std::vector<Vec>& representatives() const { return representatives_; }
    std::size_t boundary_rank() const { return boundary_rank_; }

    /// Coordinates of a cycle in the homology basis; boundaries map to zero.
    std::vector<value_type> project(const F& field, const Vec& cycle) const {
        std::vector<value_type> out(betti(), field.zero());
        auto [coeffs, rest] = reducer_.reduce_coefficients(cycle);
        if (!rest.empty()) throw NotACycle("vector is not a cycle of degree " + std::to_string(degree_));
        for (const auto& [tag, c] : coeffs) out[static_cast<std::size_t>(tag)] = c;
        return out;
    }

    bool is_boundary(const F& field, const Vec& cycle) const {
        auto coords = project(field, cycle);
        return std::all_of(coords.begin(), coords.end(), [&](const auto& c) { return field.is_zero(c); });
    }

    // Construction helpers used by homology_of_slice.
    void add_boundary(Vec v) {
        if (reducer_.insert(std::move(v)).independent) ++boundary_rank_;
    }
    void add_cycle(Vec v) {
        auto tag = static_cast<long>(representatives_.size());
        auto r = reducer_.insert(std::move(v), {}, tag);
        if (r.independent) representatives_.push_back(reducer_.vector(r.slot));
    }
    bool is_pivot(Index i) const { return reducer_.is_pivot(i); }

private:
    int degree_;
    std::size_t dim_;
    std::size_t boundary_rank_ = 0;
    std::vector<Vec> representatives_;
    ColumnReducer<F> reducer_;
};

template <class F>
HomologySlice<F> homology_of_slice(const F& field, const SparseMatrix<F>& d_in, const SparseMatrix<F>& d_out,
                                   int degree) {
    if (d_in.rows != d_out.cols)
        throw ShapeError("slice " + std::to_string(degree) + ": incoming map has " + std::to_string(d_in.rows) +
                         " rows but outgoing map has " + std::to_string(d_out.cols) + " columns");
    for (const auto& c : d_in.columns)
        if (!apply(field, d_out, c).empty())
            throw NotAComplex("d^2 != 0 at degree " + std::to_string(degree));

    HomologySlice<F> h(field, degree, d_out.cols);
    for (const auto& c : d_in.columns) h.add_boundary(c);
    // Leads of the boundaries lie among the leads of an echelon cycle basis, so
    // the cycles whose lead is not a boundary pivot complement the boundaries.
    if (d_out.is_zero()) {
        for (std::size_t i = 0; i < d_out.cols; ++i)
            if (!h.is_pivot(static_cast<Index>(i))) h.add_cycle(SparseVector<F>::unit(field, static_cast<Index>(i)));
    } else {
        for (auto& z : kernel_echelon_basis(field, d_out))
            if (!h.is_pivot(z.lead())) h.add_cycle(std::move(z));
    }
    return h;
}

}  // namespace loopalg
