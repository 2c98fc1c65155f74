#pragma once

#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "loopalg/intersection.hpp"
#include "loopalg/io.hpp"

namespace loopalg {

using nlohmann::json;

inline constexpr int report_schema = 1;

inline json validation_to_json(const ValidationReport& r) {
    json j;
    j["valid"] = r.valid();
    j["graded_commutative"] = r.commutative;
    j["poincare_duality"] = r.poincare;
    j["violations"] = json::array();
    for (const auto& v : r.violations) j["violations"].push_back({{"kind", v.kind}, {"message", v.message}});
    return j;
}

inline json coords_to_json(const HomologyRing& r, const std::vector<std::pair<std::size_t, Scalar>>& v) {
    json out = json::array();
    for (const auto& [k, c] : v) out.push_back({{"class", r.classes[k].label}, {"coeff", c.to_string()}});
    return out;
}

struct ListingOptions {
    std::size_t max_listed = 64;  // per-degree cap on listed classes, kernel/image vectors and matrix entries
};
inline json ring_to_json(const HomologyRing& r, const ListingOptions& opts = {}) {
    json j;
    j["kind"] = r.kind;
    j["min_degree"] = r.min_degree;
    j["max_degree"] = r.max_degree;
    j["partial_degrees"] = r.partial_degrees;
    j["degree_shift"] = r.shift;
    j["total_dim"] = r.classes.size();
    j["betti"] = json::array();
    for (const auto& [n, b] : r.betti) {
        json d{{"degree", n}, {"dim", b}};
        if (b > opts.max_listed) {
            d["classes_listed"] = false;
        } else {
            d["classes"] = json::array();
            for (auto k : r.classes_in_degree(n)) {
                json rep = json::array();
                for (const auto& [cell, v] : r.classes[k].representative) rep.push_back({{"cell", cell}, {"coeff", v.to_string()}});
                d["classes"].push_back({{"label", r.classes[k].label}, {"representative", rep}});
            }
        }
        j["betti"].push_back(d);
    }
    j["unit"] = r.unit ? json(r.classes[*r.unit].label) : json(nullptr);
    json p;
    p["computed"] = r.products_computed;
    if (!r.products_note.empty()) p["note"] = r.products_note;
    p["constants"] = json::array();
    p["relations"] = json::array();
    for (const auto& sc : r.products) {
        if (sc.result.empty()) {
            if (r.unit != sc.left && r.unit != sc.right)
                p["relations"].push_back(r.classes[sc.left].label + "*" + r.classes[sc.right].label + " = 0");
            continue;
        }
        p["constants"].push_back({{"left", r.classes[sc.left].label},
                                  {"right", r.classes[sc.right].label},
                                  {"result", coords_to_json(r, sc.result)}});
    }
    p["unobserved"] = r.unobserved_products;
    j["products"] = p;
    return j;
}

inline json ring_axioms_to_json(const RingAxiomReport& a) {
    return {{"unit_checked", a.unit_checked},
            {"commutativity_checked", a.commutativity_checked},
            {"associativity_checked", a.associativity_checked},
            {"associativity_complete", a.associativity_complete},
            {"failures", a.failures}};
}


inline json intersection_to_json(const IntersectionResult& res, const ListingOptions& opts = {}) {
    const auto& r = res.report;
    json j;
    j["degrees"] = json::array();
    bool trivial_positive = true;
    for (const auto& [n, rank] : r.rank) {
        json d;
        d["degree"] = n;
        d["loop_dim"] = r.loop_dim.at(n);
        d["omega_dim"] = r.omega_dim.at(n);
        d["rank"] = rank;
        if (n >= 0) d["surjective"] = r.surjective.at(n);
        if (n >= 1 && rank != 0) trivial_positive = false;
        auto list = [&](const auto& basis, const HomologyRing& ring, const char* key) {
            auto it = basis.find(n);
            std::size_t count = it == basis.end() ? 0 : it->second.size();
            d[std::string(key) + "_dim"] = count;
            if (count > opts.max_listed) {
                d[std::string(key) + "_listed"] = false;
                return;
            }
            json arr = json::array();
            if (it != basis.end())
                for (const auto& v : it->second) arr.push_back(coords_to_json(ring, v));
            d[key] = arr;
        };
        list(r.kernel_basis, res.loop, "kernel");
        list(r.image_basis, res.omega, "image");
        auto mit = r.matrix.find(n);
        std::size_t entries = mit == r.matrix.end() ? 0 : mit->second.size();
        if (entries > opts.max_listed) {
            d["matrix_listed"] = false;
        } else {
            json m = json::array();
            if (mit != r.matrix.end())
                for (const auto& [row, col, v] : mit->second)
                    m.push_back({{"omega", res.omega.classes[row].label}, {"loop", res.loop.classes[col].label}, {"value", v.to_string()}});
            d["matrix"] = m;
        }
        j["degrees"].push_back(d);
    }
    j["trivial_in_positive_degrees"] = trivial_positive;
    j["surjective_throughout_window"] = r.surjective_throughout();
    j["chain_map_verified"] = r.chain_map_ok;
    j["multiplicativity"] = {{"checked", r.multiplicativity_checked}, {"failures", r.multiplicativity_failures}};
    j["nilpotency"] = {{"bound", r.nilpotency.bound},
                       {"observed", r.nilpotency.observed},
                       {"respected", r.nilpotency.respected},
                       {"unobserved", r.nilpotency.unobserved},
                       {"complete", r.nilpotency.complete}};
    j["centrality"] = {{"checked", r.centrality.checked},
                       {"unobserved", r.centrality.unobserved},
                       {"violations", r.centrality.violations}};
    j["lifting"] = {{"checked", r.lift_checks}, {"disagreements", r.lift_disagreements}};
    return j;
}

namespace detail {

inline std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace detail

inline std::string ring_to_table(const HomologyRing& r, const std::string& title, const ListingOptions& opts = {}) {
    std::ostringstream os;
    os << title << "\n";
    if (r.kind == "loop" || r.kind == "e2")
        os << "degrees are shifted: HH_n(LM) = H_{n+d}(LM) with d = " << r.shift << "\n";
    os << "window: degrees " << r.min_degree << " .. " << r.max_degree - 1 << " (partial: " << r.partial_degrees.front()
       << ", " << r.partial_degrees.back() << ")\n\n";
    os << "degree  dim  classes\n";
    for (const auto& [n, b] : r.betti) {
        std::string labels;
        if (b > opts.max_listed)
            labels = "(not listed)";
        else
            for (auto k : r.classes_in_degree(n)) labels += (labels.empty() ? "" : ", ") + r.classes[k].label;
        os << detail::pad(std::to_string(n), 8) << detail::pad(std::to_string(b), 5) << labels << "\n";
    }
    if (r.products_computed) {
        os << "\nproducts (nonzero, excluding the unit):\n";
        for (const auto& sc : r.products) {
            if (sc.result.empty() || r.unit == sc.left || r.unit == sc.right) continue;
            os << "  " << r.classes[sc.left].label << " * " << r.classes[sc.right].label << " =";
            bool first = true;
            for (const auto& [k, v] : sc.result) {
                os << (first ? " " : " + ") << (v.to_string() == "1" ? "" : v.to_string() + " ") << r.classes[k].label;
                first = false;
            }
            os << "\n";
        }
        os << "relations (zero products): ";
        std::size_t count = 0;
        for (const auto& sc : r.products)
            if (sc.result.empty() && r.unit != sc.left && r.unit != sc.right) {
                if (count < 24) os << (count ? ", " : "") << r.classes[sc.left].label << "*" << r.classes[sc.right].label;
                ++count;
            }
        if (count > 24) os << ", ... (" << count << " total)";
        os << "\nproducts leaving the window (unobserved): " << r.unobserved_products << "\n";
    } else if (!r.products_note.empty()) {
        os << "\n" << r.products_note << "\n";
    }
    return os.str();
}

inline std::string intersection_to_table(const IntersectionResult& res) {
    const auto& r = res.report;
    std::ostringstream os;
    os << "intersection morphism I : HH_*(LM) -> H_*(Omega M) for " << r.algebra << " over " << r.field.to_string()
       << "\n";
    os << "loop degrees are shifted by d = " << r.formal_dimension << "\n\n";
    os << "degree  loop  omega  rank  kernel  onto\n";
    bool trivial = true;
    for (const auto& [n, rank] : r.rank) {
        os << detail::pad(std::to_string(n), 8) << detail::pad(std::to_string(r.loop_dim.at(n)), 6)
           << detail::pad(std::to_string(r.omega_dim.at(n)), 7) << detail::pad(std::to_string(rank), 6)
           << detail::pad(std::to_string(r.loop_dim.at(n) - rank), 8) << (n >= 0 ? (r.surjective.at(n) ? "yes" : "no") : "-")
           << "\n";
        if (n >= 1 && rank != 0) trivial = false;
    }
    os << "\n";
    if (trivial) os << "I = 0 in all degrees >= 1\n";
    os << "surjective throughout window: " << (r.surjective_throughout() ? "yes" : "no") << "\n";
    os << "chain map verified: " << (r.chain_map_ok ? "yes" : "no") << "\n";
    os << "multiplicativity: " << r.multiplicativity_checked << " constants checked, "
       << r.multiplicativity_failures.size() << " failures\n";
    os << "Nil(Ker I): observed " << r.nilpotency.observed << ", bound " << r.nilpotency.bound
       << (r.nilpotency.complete ? "" : " (products not computed)") << ", unobserved " << r.nilpotency.unobserved << "\n";
    os << "centrality of Im I: " << r.centrality.checked << " commutators checked, " << r.centrality.violations.size()
       << " violations, " << r.centrality.unobserved << " unobserved\n";
    os << "lifting criterion: " << r.lift_checks << " classes checked, " << r.lift_disagreements.size()
       << " disagreements\n";
    return os.str();
}

}  // namespace loopalg
