#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "loopalg/loopalg.hpp"

namespace testing_util {

inline std::string algebra_path(const std::string& name) { return std::string(LOOPALG_ALGEBRAS_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline loopalg::FDGA load(const std::string& name) { return loopalg::parse_algebra_file(read_text(algebra_path(name))); }

inline std::vector<std::size_t> betti_list(const loopalg::HomologyRing& r) {
    std::vector<std::size_t> out;
    for (const auto& [n, b] : r.betti) out.push_back(b);
    return out;
}

// Coordinates of x*y, or nullopt when unobserved.
inline std::optional<std::vector<std::pair<std::size_t, loopalg::Scalar>>> product(const loopalg::HomologyRing& r,
                                                                                  const std::string& x,
                                                                                  const std::string& y) {
    auto i = r.find(x);
    auto j = r.find(y);
    if (!i || !j) return std::nullopt;
    const auto* sc = r.product(*i, *j);
    if (!sc) return std::nullopt;
    return sc->result;
}

}  // namespace testing_util

namespace testing_util {

// Rank by dense Gaussian elimination, independent of the sparse reducer.
template <class F>
std::size_t dense_rank(const F& f, std::vector<std::vector<typename F::value_type>> a) {
    std::size_t rank = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && f.is_zero(a[p][c])) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rank]);
        const auto inv = f.inv(a[rank][c]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (f.is_zero(a[r][c])) continue;
            const auto k = f.mul(a[r][c], inv);
            for (std::size_t j = c; j < cols; ++j) a[r][j] = f.sub(a[r][j], f.mul(k, a[rank][j]));
        }
        ++rank;
    }
    return rank;
}

// Betti number of a Hochschild window in one degree, from the window's own
// cells and boundary formula but with dense elimination over the full slice
// (no length splitting).
template <class W>
std::size_t oracle_betti(W& w, int degree) {
    const auto& f = w.field();
    auto cells = [&](int n) {
        std::vector<loopalg::Cell> out;
        for (int l : w.chains().lengths(n))
            for (const auto& c : w.chains().block(n, l).cells) out.push_back(c);
        return out;
    };
    auto rank_d = [&](int n) -> std::size_t {
        auto src = cells(n);
        auto dst = cells(n - 1);
        if (src.empty() || dst.empty()) return 0;
        std::map<loopalg::Cell, std::size_t> row;
        for (std::size_t i = 0; i < dst.size(); ++i) row[dst[i]] = i;
        std::vector<std::vector<typename W::V>> m(dst.size(), std::vector<typename W::V>(src.size(), f.zero()));
        for (std::size_t j = 0; j < src.size(); ++j) {
            typename W::Terms terms;
            w.boundary(src[j], f.one(), terms);
            for (const auto& [cell, v] : terms) {
                auto& e = m[row.at(cell)][j];
                e = f.add(e, v);
            }
        }
        return dense_rank(f, std::move(m));
    };
    return cells(degree).size() - rank_d(degree) - rank_d(degree + 1);
}

}  // namespace testing_util
