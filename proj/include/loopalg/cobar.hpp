#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "loopalg/dga.hpp"

namespace loopalg {

/// A word in T(W); letter i is stored as the byte i.
using Word = std::string;

inline std::size_t letter(const Word& w, std::size_t p) { return static_cast<unsigned char>(w[p]); }
inline char as_letter(std::size_t i) { return static_cast<char>(static_cast<unsigned char>(i)); }

/// Finite linear combination of words.
using WordChain = std::map<Word, Scalar>;

inline void accumulate(WordChain& into, const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = into.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) into.erase(it);
    }
}

/// The cobar construction (T(W), d) of the dual coalgebra of an FDGA.
/// Generator w_i is dual to s e_i and has lower degree |e_i| - 1.
struct CobarAlgebra {
    std::string name;
    FieldSpec field;
    int formal_dimension = 0;
    GradedBasis generators;
    // beta[i] lists (j, beta_i^j); quadratic[i] lists (j, k, a_i^{jk}).
    std::vector<std::vector<std::pair<std::size_t, Scalar>>> beta;
    std::vector<std::vector<std::tuple<std::size_t, std::size_t, Scalar>>> quadratic;

    std::size_t size() const { return generators.size(); }
    int degree(std::size_t i) const { return generators.degree(i); }
    int degree(const Word& w) const {
        int s = 0;
        for (std::size_t p = 0; p < w.size(); ++p) s += degree(letter(w, p));
        return s;
    }
    int min_generator_degree() const {
        int m = 0;
        for (std::size_t i = 0; i < size(); ++i) m = (m == 0 || degree(i) < m) ? degree(i) : m;
        return m;
    }
    bool has_linear_part() const {
        return std::any_of(beta.begin(), beta.end(), [](const auto& b) { return !b.empty(); });
    }

    /// d(w_i) as a chain.
    WordChain d_generator(std::size_t i) const {
        WordChain out;
        for (const auto& [j, c] : beta[i]) accumulate(out, Word(1, as_letter(j)), c);
        for (const auto& [j, k, c] : quadratic[i]) accumulate(out, Word{as_letter(j), as_letter(k)}, c);
        return out;
    }

    std::string word_label(const Word& w) const {
        if (w.empty()) return "1";
        std::string out;
        for (std::size_t p = 0; p < w.size(); ++p) {
            if (p) out += ' ';
            out += generators.label(letter(w, p));
        }
        return out;
    }
};

/// Compact display of a word: repeated letters become powers.
inline std::string power_label(const CobarAlgebra& c, const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t p = 0; p < w.size();) {
        std::size_t q = p;
        while (q < w.size() && w[q] == w[p]) ++q;
        if (!out.empty()) out += ' ';
        out += c.generators.label(letter(w, p));
        if (q - p > 1) out += "^" + std::to_string(q - p);
        p = q;
    }
    return out;
}

/// Derivation extension of d with the Koszul sign (-1)^{degree of the prefix}.
inline WordChain cobar_differential(const CobarAlgebra& c, const WordChain& x) {
    std::vector<WordChain> dgen(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) dgen[i] = c.d_generator(i);
    WordChain out;
    for (const auto& [w, coeff] : x) {
        int prefix = 0;
        for (std::size_t p = 0; p < w.size(); ++p) {
            std::size_t i = letter(w, p);
            Scalar sg = Scalar::from_int(c.field, sign_of(prefix)) * coeff;
            for (const auto& [m, v] : dgen[i]) accumulate(out, w.substr(0, p) + m + w.substr(p + 1), v * sg);
            prefix += c.degree(i);
        }
    }
    return out;
}

inline WordChain word_product(const WordChain& x, const WordChain& y) {
    WordChain out;
    for (const auto& [u, a] : x)
        for (const auto& [v, b] : y) accumulate(out, u + v, a * b);
    return out;
}

/// Degree of a homogeneous chain; 0 for the zero chain.
inline int chain_degree(const CobarAlgebra& c, const WordChain& x) { return x.empty() ? 0 : c.degree(x.begin()->first); }

/// [x, y] = xy - (-1)^{|x||y|} yx for homogeneous x, y.
inline WordChain commutator(const CobarAlgebra& c, const WordChain& x, const WordChain& y) {
    WordChain out = word_product(x, y);
    Scalar sg = Scalar::from_int(c.field, -sign_of(static_cast<long>(chain_degree(c, x)) * chain_degree(c, y)));
    for (const auto& [w, v] : word_product(y, x)) accumulate(out, w, v * sg);
    return out;
}

inline std::string cobar_label(const FDGA& a, std::size_t i) {
    if (a.dim() == 1) return "v";
    return "v_" + a.basis.label(i);
}

/// Builds the structure constants
///   beta_i^j = (-1)^{|w_j|} rho_j^i,
///   a_i^{jk} = (-1)^{|e_j| + |e_j||e_k|} alpha_{jk}^i,
/// with |e| cohomological, and checks d^2 = 0 on every generator.
inline CobarAlgebra build_cobar(const FDGA& a) {
    if (a.dim() > 255) throw NotSupported("more than 255 generators");
    CobarAlgebra c;
    c.name = a.name;
    c.field = a.field;
    c.formal_dimension = a.formal_dimension;
    for (std::size_t i = 0; i < a.dim(); ++i) c.generators.add(cobar_label(a, i), a.upper(i) - 1);
    c.beta.resize(a.dim());
    c.quadratic.resize(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j)
        for (const auto& [i, rho] : a.d(j)) c.beta[i].push_back({j, rho * a.sign(c.degree(j))});
    for (const auto& [key, prod] : a.products) {
        auto [j, k] = key;
        Scalar sg = a.sign(a.upper(j) + static_cast<long>(a.upper(j)) * a.upper(k));
        for (const auto& [i, alpha] : prod) c.quadratic[i].push_back({j, k, alpha * sg});
    }
    for (auto& b : c.beta) std::sort(b.begin(), b.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& q : c.quadratic)
        std::sort(q.begin(), q.end(), [](const auto& x, const auto& y) {
            return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
        });
    for (std::size_t i = 0; i < c.size(); ++i) {
        auto dd = cobar_differential(c, c.d_generator(i));
        if (!dd.empty()) throw InternalError("cobar d^2 != 0 on generator " + c.generators.label(i));
    }
    return c;
}

/// Words of the given degree (and length, when length >= 0), in
/// lexicographic order of generator indices.
inline std::vector<Word> enumerate_words(const std::vector<int>& degrees, int degree, int length = -1) {
    std::vector<Word> out;
    if (degree < 0) return out;
    int min_deg = 0;
    for (int d : degrees)
        if (d > 0 && (min_deg == 0 || d < min_deg)) min_deg = d;
    Word w;
    // left < 0 means any length.
    auto rec = [&](auto&& self, int remaining, int left) -> void {
        if (remaining == 0 && left <= 0) {
            out.push_back(w);
            return;
        }
        if (left == 0 || min_deg == 0 || remaining < min_deg) return;
        if (left > 0 && remaining < left * min_deg) return;
        for (std::size_t i = 0; i < degrees.size(); ++i) {
            if (degrees[i] <= 0 || degrees[i] > remaining) continue;
            w.push_back(as_letter(i));
            self(self, remaining - degrees[i], left < 0 ? -1 : left - 1);
            w.pop_back();
        }
    };
    rec(rec, degree, length);
    return out;
}

inline std::vector<Word> enumerate_words(const CobarAlgebra& c, int degree, int length = -1) {
    std::vector<int> degrees;
    for (std::size_t i = 0; i < c.size(); ++i) degrees.push_back(c.degree(i));
    return enumerate_words(degrees, degree, length);
}

/// Typed copy of d(w_i) used by the slice builders.
template <class F>
struct TypedCobar {
    using V = typename F::value_type;
    F field;
    std::vector<int> degree;
    std::vector<std::vector<std::pair<Word, V>>> d;

    TypedCobar(const F& f, const CobarAlgebra& c) : field(f) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            degree.push_back(c.degree(i));
            std::vector<std::pair<Word, V>> terms;
            for (const auto& [w, v] : c.d_generator(i)) terms.push_back({w, v.to(f)});
            d.push_back(std::move(terms));
        }
    }

    int word_degree(const Word& w) const {
        int s = 0;
        for (std::size_t p = 0; p < w.size(); ++p) s += degree[letter(w, p)];
        return s;
    }

    /// Appends c * d(w) to out.
    void differential(const Word& w, const V& c, std::vector<std::pair<Word, V>>& out) const {
        int prefix = 0;
        for (std::size_t p = 0; p < w.size(); ++p) {
            std::size_t i = letter(w, p);
            V sc = prefix % 2 == 0 ? c : field.neg(c);
            for (const auto& [m, v] : d[i]) {
                Word t;
                t.reserve(w.size() + 1);
                t.append(w, 0, p);
                t += m;
                t.append(w, p + 1, Word::npos);
                out.push_back({std::move(t), field.mul(sc, v)});
            }
            prefix += degree[i];
        }
    }
};

}  // namespace loopalg
