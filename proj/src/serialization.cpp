#include "toruslab/serialization.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "toruslab/errors.hpp"

namespace toruslab {

namespace {

nlohmann::json index_to_json(const MultiIndex& v) {
    nlohmann::json j = nlohmann::json::array();
    for (int x : v) j.push_back(x);
    return j;
}

MultiIndex index_from_json(const nlohmann::json& j, bool nonnegative) {
    if (!j.is_array()) throw ConfigError("multi-index must be an array");
    MultiIndex out;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw ConfigError("multi-index entries must be integers");
        int v = x.get<int>();
        if (nonnegative && v < 0) throw ConfigError("taylor exponents must be >= 0");
        out.push_back(v);
    }
    return out;
}

double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError(std::string("missing or non-numeric field: ") + key);
    return j.at(key).get<double>();
}

void ensure_parent(const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
}

}  // namespace

nlohmann::json series_to_json(const FourierTaylorSeries& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, l] : f.sorted_indices()) {
        if (!is_canonical(k) && !is_zero(k)) continue;
        auto c = f.coefficient(k, l);
        nlohmann::json t;
        t["k"] = index_to_json(k);
        t["l"] = index_to_json(l);
        if (is_zero(k)) {
            t["re"] = c.real();
            t["im"] = c.imag();
        } else {
            t["re"] = 2.0 * c.real();
            t["im"] = -2.0 * c.imag();
        }
        terms.push_back(std::move(t));
    }
    nlohmann::json j;
    j["n"] = f.dimension();
    j["k_max"] = f.k_max();
    j["m_max"] = f.m_max();
    j["terms"] = std::move(terms);
    return j;
}

FourierTaylorSeries series_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_integer())
        throw ConfigError("series file needs an integer dimension field n");
    int n = j.at("n").get<int>();
    if (n < 1) throw ConfigError("series dimension must be >= 1");

    struct RawTerm {
        MultiIndex k, l;
        double re, im;
    };
    std::vector<RawTerm> raw;
    int k_need = 0, m_need = 0;
    if (j.contains("terms")) {
        if (!j.at("terms").is_array()) throw ConfigError("series terms must be an array");
        for (const auto& t : j.at("terms")) {
            RawTerm r;
            if (!t.contains("k") || !t.contains("l"))
                throw ConfigError("series term needs k and l");
            r.k = index_from_json(t.at("k"), false);
            r.l = index_from_json(t.at("l"), true);
            if (static_cast<int>(r.k.size()) != n || static_cast<int>(r.l.size()) != n)
                throw ConfigError("series term index length does not match n");
            if (!is_zero(r.k) && !is_canonical(r.k))
                throw ConfigError("series terms must use canonical k (first nonzero entry positive)");
            r.re = require_number(t, "re");
            r.im = t.contains("im") ? require_number(t, "im") : 0.0;
            k_need = std::max(k_need, l1_norm(r.k));
            m_need = std::max(m_need, l1_norm(r.l));
            raw.push_back(std::move(r));
        }
    }

    int k_max = k_need, m_max = m_need;
    if (j.contains("k_max")) {
        if (!j.at("k_max").is_number_integer()) throw ConfigError("k_max must be an integer");
        k_max = j.at("k_max").get<int>();
        if (k_max < k_need) throw ConfigError("a term exceeds the declared k_max");
    }
    if (j.contains("m_max")) {
        if (!j.at("m_max").is_number_integer()) throw ConfigError("m_max must be an integer");
        m_max = j.at("m_max").get<int>();
        if (m_max < m_need) throw ConfigError("a term exceeds the declared m_max");
    }

    FourierTaylorSeries f(n, k_max, m_max);
    for (const auto& r : raw) {
        if (is_zero(r.k)) {
            f.add_term(r.k, r.l, {r.re, r.im});
        } else {
            FourierTaylorSeries::Coeff c(r.re / 2.0, -r.im / 2.0);
            f.add_term(r.k, r.l, c);
            f.add_term(negated(r.k), r.l, std::conj(c));
        }
    }
    return f;
}

nlohmann::json polynomial_to_json(const ActionPolynomial& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [l, c] : p.table()) {
        nlohmann::json t;
        t["l"] = index_to_json(l);
        t["c"] = c;
        terms.push_back(std::move(t));
    }
    nlohmann::json j;
    j["n"] = p.dimension();
    j["m"] = p.max_degree();
    j["terms"] = std::move(terms);
    return j;
}

ActionPolynomial polynomial_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_integer() ||
        !j.contains("m") || !j.at("m").is_number_integer())
        throw ConfigError("polynomial file needs integer fields n and m");
    ActionPolynomial p(j.at("n").get<int>(), j.at("m").get<int>());
    if (j.contains("terms")) {
        if (!j.at("terms").is_array()) throw ConfigError("polynomial terms must be an array");
        for (const auto& t : j.at("terms")) {
            if (!t.contains("l")) throw ConfigError("polynomial term needs l");
            MultiIndex l = index_from_json(t.at("l"), true);
            p.add_coefficient(l, require_number(t, "c"));
        }
    }
    return p;
}

nlohmann::json diophantine_report_to_json(const DiophantineReport& r) {
    nlohmann::json j;
    j["omega"] = r.omega;
    j["tau"] = r.tau;
    j["K"] = r.K;
    j["gamma_est"] = r.gamma_est;
    j["raw_min"] = r.raw_min;
    j["argmin_k"] = index_to_json(r.argmin_k);
    j["scanned_count"] = r.scanned_count;
    return j;
}

nlohmann::json membership_report_to_json(const OmegaMembershipReport& r) {
    nlohmann::json j;
    j["member"] = r.member;
    j["boundary_margin"] = r.boundary_margin;
    j["gamma_scan"] = r.gamma_scan;
    j["scan"] = diophantine_report_to_json(r.scan);
    return j;
}

nlohmann::json normal_form_to_json(const NormalFormResult& r) {
    nlohmann::json j;
    j["order_m"] = r.order_m;
    j["omega"] = r.omega;
    j["omega_effective"] = r.omega_effective;
    j["H_m"] = polynomial_to_json(r.H_m);
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : r.generators) gens.push_back(series_to_json(g));
    j["generators"] = std::move(gens);
    j["transformed"] = series_to_json(r.transformed);
    nlohmann::json rem;
    for (const auto& [order, v] : r.remainder_norm_by_order)
        rem[std::to_string(order)] = v;
    j["remainder_norm_by_order"] = std::move(rem);
    nlohmann::json log = nlohmann::json::array();
    for (const auto& e : r.small_divisor_log) {
        nlohmann::json le;
        le["k"] = index_to_json(e.k);
        le["divisor"] = e.divisor;
        le["order"] = e.order;
        log.push_back(std::move(le));
    }
    j["small_divisor_log"] = std::move(log);
    j["residual_max"] = r.residual_max;
    j["input_scale"] = r.input_scale;
    j["k_work"] = r.k_work;
    j["m_work"] = r.m_work;
    j["divisor_floor"] = r.divisor_floor;
    return j;
}

nlohmann::json steepness_verdict_to_json(const SteepnessVerdict& v) {
    nlohmann::json j;
    j["kind"] = v.kind;
    j["accepted"] = v.accepted;
    j["rho"] = v.rho;
    j["C"] = v.C;
    j["delta"] = v.delta;
    j["kappa"] = v.kappa;
    j["det_floor"] = v.det_floor;
    j["p_list"] = v.p_list;
    j["m"] = v.m;
    nlohmann::json s;
    s["seed"] = v.sampling.seed;
    s["subspaces_per_dim"] = v.sampling.subspaces_per_dim;
    s["perturbations"] = v.sampling.perturbations;
    s["xi_points"] = v.sampling.xi_points;
    s["eta_points"] = v.sampling.eta_points;
    s["multistarts"] = v.sampling.multistarts;
    s["fd_step"] = v.sampling.fd_step;
    j["sampling"] = std::move(s);
    if (v.witness) {
        nlohmann::json w;
        w["Lambda"] = v.witness->Lambda;
        if (v.witness->P) w["P"] = polynomial_to_json(*v.witness->P);
        w["point"] = v.witness->point;
        w["xi"] = v.witness->xi;
        w["value"] = v.witness->value;
        w["threshold"] = v.witness->threshold;
        w["detail"] = v.witness->detail;
        j["witness"] = std::move(w);
    }
    return j;
}

nlohmann::json escape_record_to_json(const EscapeTimeRecord& r) {
    nlohmann::json j;
    j["r"] = r.r;
    j["I_star"] = r.I_star;
    j["initial_theta"] = r.initial.theta;
    j["initial_I"] = r.initial.I;
    j["escape_time"] = r.escape_time;
    j["censored"] = r.censored;
    j["exit_norm"] = r.exit_norm;
    j["energy_drift"] = r.energy_drift;
    j["steps"] = r.steps;
    j["dt"] = r.dt;
    j["seed"] = r.seed;
    j["ok"] = r.ok;
    j["error"] = r.error;
    return j;
}

EscapeTimeRecord escape_record_from_json(const nlohmann::json& j) {
    EscapeTimeRecord r;
    try {
        r.r = j.at("r").get<double>();
        r.I_star = j.at("I_star").get<std::vector<double>>();
        r.initial.theta = j.at("initial_theta").get<std::vector<double>>();
        r.initial.I = j.at("initial_I").get<std::vector<double>>();
        r.escape_time = j.at("escape_time").get<double>();
        r.censored = j.at("censored").get<bool>();
        r.exit_norm = j.at("exit_norm").get<double>();
        r.energy_drift = j.at("energy_drift").get<double>();
        r.steps = j.at("steps").get<long long>();
        r.dt = j.at("dt").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.ok = j.at("ok").get<bool>();
        r.error = j.at("error").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed escape record: ") + e.what());
    }
    return r;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    ensure_parent(path);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw ConfigError("write failed: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
}

void write_jsonl_file(const std::string& path,
                      const std::vector<nlohmann::json>& rows) {
    ensure_parent(path);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    for (const auto& row : rows) out << row.dump() << '\n';
    if (!out) throw ConfigError("write failed: " + path);
}

std::vector<nlohmann::json> read_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::vector<nlohmann::json> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            rows.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("malformed JSONL in " + path + ": " + e.what());
        }
    }
    return rows;
}

void write_text_file(const std::string& path, const std::string& text) {
    ensure_parent(path);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << text;
    if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace toruslab
