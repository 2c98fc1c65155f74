#pragma once

#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "loopalg/linalg.hpp"

namespace loopalg {

/// Basis element of a slice, encoded as a byte string (layout is up to the
/// producer of the complex).
using Cell = std::string;

/// Lazily built, degree-indexed slices of a chain complex with differential of
/// degree -1. When `split` is set the differential also raises a length grading
/// by exactly one, and slices are stored as (degree, length) blocks; otherwise
/// each degree is a single block with length -1.
template <class F>
class ChainWindow {
public:
    using V = typename F::value_type;
    using Terms = std::vector<std::pair<Cell, V>>;

    struct Source {
        bool split = false;
        std::function<std::vector<Cell>(int degree, int length)> cells;
        std::function<void(const Cell&, const V&, Terms&)> boundary;  // appends c * D(cell)
        std::function<int(const Cell&)> length;
        std::function<int(int degree)> max_length;
    };

    struct Block {
        std::vector<Cell> cells;
        std::unordered_map<Cell, Index> index;
        bool has_differential = false;
        SparseMatrix<F> d;  // to block (degree - 1, length + 1)
    };

    struct BlockHomology {
        int length;
        HomologySlice<F> slice;
    };

    struct DegreeHomology {
        int degree = 0;
        std::vector<BlockHomology> blocks;
        std::size_t betti = 0;
    };

    ChainWindow(F field, Source source) : field_(std::move(field)), src_(std::move(source)) {}

    const F& field() const { return field_; }
    bool split() const { return src_.split; }

    std::vector<int> lengths(int degree) const {
        if (!src_.split) return {-1};
        std::vector<int> out;
        for (int l = 0; l <= src_.max_length(degree); ++l) out.push_back(l);
        return out;
    }

    int length_of(const Cell& c) const { return src_.split ? src_.length(c) : -1; }

    Block& block(int degree, int length) {
        auto key = std::make_pair(degree, length);
        auto it = blocks_.find(key);
        if (it != blocks_.end()) return it->second;
        Block b;
        if (!src_.split || length >= 0) b.cells = src_.cells(degree, length);
        b.index.reserve(b.cells.size());
        for (std::size_t i = 0; i < b.cells.size(); ++i) b.index.emplace(b.cells[i], static_cast<Index>(i));
        return blocks_.emplace(key, std::move(b)).first->second;
    }

    std::size_t slice_dimension(int degree) {
        std::size_t n = 0;
        for (int l : lengths(degree)) n += block(degree, l).cells.size();
        return n;
    }

    /// Matrix of D from block (degree, length) to (degree - 1, length + 1).
    const SparseMatrix<F>& differential(int degree, int length) {
        Block& src = block(degree, length);
        if (src.has_differential) return src.d;
        const int tl = src_.split ? length + 1 : -1;
        Block& dst = block(degree - 1, tl);
        SparseMatrix<F> m(dst.cells.size(), src.cells.size());
        Terms terms;
        for (std::size_t c = 0; c < src.cells.size(); ++c) {
            terms.clear();
            src_.boundary(src.cells[c], field_.one(), terms);
            std::vector<std::pair<Index, V>> pairs;
            pairs.reserve(terms.size());
            for (auto& [cell, v] : terms) {
                auto t = dst.index.find(cell);
                if (t == dst.index.end())
                    throw InternalError("boundary leaves slice " + std::to_string(degree - 1) + " (length " +
                                        std::to_string(tl) + ")");
                pairs.push_back({t->second, std::move(v)});
            }
            m.columns[c] = SparseVector<F>::from_pairs(field_, std::move(pairs));
        }
        src.d = std::move(m);
        src.has_differential = true;
        return src.d;
    }

    /// Checks D o D = 0 from degree to degree - 2 on every block.
    void check_d_squared(int degree) {
        for (int l : lengths(degree)) {
            if (block(degree, l).cells.empty()) continue;
            const auto& d1 = differential(degree, l);
            const auto& d2 = differential(degree - 1, src_.split ? l + 1 : -1);
            for (const auto& col : d1.columns)
                if (!apply(field_, d2, col).empty())
                    throw NotAComplex("D^2 != 0 from degree " + std::to_string(degree));
        }
    }

    const DegreeHomology& homology(int degree) {
        auto it = homology_.find(degree);
        if (it != homology_.end()) return it->second;
        DegreeHomology h;
        h.degree = degree;
        for (int l : lengths(degree)) {
            Block& b = block(degree, l);
            if (b.cells.empty()) continue;
            const auto& d_out = differential(degree, l);
            int in_len = src_.split ? l - 1 : -1;
            SparseMatrix<F> empty_in(b.cells.size(), 0);
            const SparseMatrix<F>& d_in =
                (src_.split && in_len < 0) ? empty_in : differential(degree + 1, in_len);
            auto slice = homology_of_slice(field_, d_in, d_out, degree);
            h.betti += slice.betti();
            h.blocks.push_back({l, std::move(slice)});
        }
        return homology_.emplace(degree, std::move(h)).first->second;
    }

    std::size_t betti(int degree) { return homology(degree).betti; }

    /// Representative cycle of class k in the given degree.
    Terms representative(int degree, std::size_t k) {
        const auto& h = homology(degree);
        for (const auto& bh : h.blocks) {
            if (k < bh.slice.betti()) {
                const Block& b = block(degree, bh.length);
                Terms out;
                for (const auto& t : bh.slice.representatives()[k].terms) out.push_back({b.cells[t.index], t.value});
                return out;
            }
            k -= bh.slice.betti();
        }
        throw ShapeError("class index out of range in degree " + std::to_string(degree));
    }

    /// Length block of class k (or -1 when unsplit).
    int class_length(int degree, std::size_t k) {
        const auto& h = homology(degree);
        for (const auto& bh : h.blocks) {
            if (k < bh.slice.betti()) return bh.length;
            k -= bh.slice.betti();
        }
        throw ShapeError("class index out of range");
    }

    /// Coordinates of a cycle in the homology basis of its degree.
    std::vector<V> project(int degree, const Terms& cycle) {
        const auto& h = homology(degree);
        std::map<int, std::vector<std::pair<Index, V>>> parts;
        for (const auto& [cell, v] : cycle) {
            int l = length_of(cell);
            Block& b = block(degree, l);
            auto it = b.index.find(cell);
            if (it == b.index.end()) throw ShapeError("chain has a term outside degree " + std::to_string(degree));
            parts[l].push_back({it->second, v});
        }
        std::vector<V> out;
        for (const auto& bh : h.blocks) {
            auto it = parts.find(bh.length);
            if (it == parts.end()) {
                out.insert(out.end(), bh.slice.betti(), field_.zero());
                continue;
            }
            auto vec = SparseVector<F>::from_pairs(field_, std::move(it->second));
            auto coords = bh.slice.project(field_, vec);
            out.insert(out.end(), coords.begin(), coords.end());
            parts.erase(it);
        }
        for (auto& [l, terms] : parts) {
            // Blocks without homology: the component must still be a boundary.
            auto vec = SparseVector<F>::from_pairs(field_, std::move(terms));
            if (vec.empty()) continue;
            Block& b = block(degree, l);
            const auto& d_out = differential(degree, l);
            if (!apply(field_, d_out, vec).empty()) throw NotACycle("chain in degree " + std::to_string(degree));
            (void)b;
        }
        return out;
    }

    /// D of an arbitrary chain.
    Terms apply_differential(const Terms& chain) const {
        Terms raw;
        for (const auto& [cell, v] : chain) src_.boundary(cell, v, raw);
        return consolidate(raw);
    }

    Terms consolidate(const Terms& raw) const {
        std::map<Cell, V> acc;
        for (const auto& [cell, v] : raw) {
            auto [it, ins] = acc.emplace(cell, v);
            if (!ins) it->second = field_.add(it->second, v);
        }
        Terms out;
        for (auto& [cell, v] : acc)
            if (!field_.is_zero(v)) out.push_back({cell, v});
        return out;
    }

private:
    F field_;
    Source src_;
    std::map<std::pair<int, int>, Block> blocks_;
    std::map<int, DegreeHomology> homology_;
};

}  // namespace loopalg
