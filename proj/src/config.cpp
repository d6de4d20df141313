// config.cpp

#include "nmdyn/config.hpp"

#include <cmath>

namespace nmdyn::cli {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
    throw ConfigError(ErrorKind::ValidationError, path, what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) invalid(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) invalid(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) invalid(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) invalid(path, "expected a finite number");
    return x;
}

std::size_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 0) invalid(path, "expected a non-negative integer");
    return v.get<std::size_t>();
}

Complex as_complex(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) invalid(path, "expected a complex number [re, im]");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

SystemHamiltonian parse_system(const json& sys) {
    const std::size_t n = as_count(require(sys, "n", "system"), "system.n");
    if (n == 0) invalid("system.n", "level count must be >= 1");
    const json& rows = require(sys, "matrix", "system");
    if (!rows.is_array() || rows.size() != n) invalid("system.matrix", "expected n rows");
    ComplexMatrix m{static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const std::string rp = index_path("system.matrix", i);
        if (!rows[i].is_array() || rows[i].size() != n) invalid(rp, "expected n entries");
        for (std::size_t j = 0; j < n; ++j) m(Eigen::Index(i), Eigen::Index(j)) = as_complex(rows[i][j], index_path(rp, j));
    }
    if (!is_hermitian(m)) invalid("system.matrix", "matrix is not Hermitian");
    return SystemHamiltonian(std::move(m));
}

BathModel parse_bath(const json& bath) {
    std::vector<LorentzPeak> peaks;
    if (auto it = bath.find("peaks"); it != bath.end() && !it->is_null()) {
        if (!it->is_array()) invalid("bath.peaks", "expected an array");
        for (std::size_t j = 0; j < it->size(); ++j) {
            const std::string pp = index_path("bath.peaks", j);
            const json& pk = (*it)[j];
            LorentzPeak peak;
            peak.g = as_number(require(pk, "g", pp), pp + ".g");
            peak.gamma = as_number(require(pk, "gamma", pp), pp + ".gamma");
            peak.epsilon = as_number(require(pk, "epsilon", pp), pp + ".epsilon");
            if (!(peak.g > 0.0)) invalid(pp + ".g", "coupling must be > 0");
            if (!(peak.gamma > 0.0)) invalid(pp + ".gamma", "width must be > 0");
            peaks.push_back(peak);
        }
    }
    double eta = 0.0;
    if (auto it = bath.find("eta"); it != bath.end() && !it->is_null()) eta = as_number(*it, "bath.eta");
    if (eta < 0.0) invalid("bath.eta", "Ohmic coefficient must be >= 0");
    std::optional<double> cutoff;
    if (auto it = bath.find("cutoff"); it != bath.end() && !it->is_null()) {
        cutoff = as_number(*it, "bath.cutoff");
        if (!(*cutoff > 0.0)) invalid("bath.cutoff", "cutoff must be > 0");
    }
    return BathModel(std::move(peaks), eta, cutoff);
}

InitialState parse_initial(const json& init, std::size_t n) {
    const json& psi_json = require(init, "psi", "initial");
    if (!psi_json.is_array() || psi_json.size() != n) invalid("initial.psi", "expected n amplitudes");
    ComplexVector psi{static_cast<Eigen::Index>(n)};
    for (std::size_t i = 0; i < n; ++i) psi(Eigen::Index(i)) = as_complex(psi_json[i], index_path("initial.psi", i));
    const Complex psi0 = as_complex(require(init, "psi0", "initial"), "initial.psi0");
    const double total = psi.squaredNorm() + std::norm(psi0);
    if (std::abs(total - 1.0) > kNormalizationTolerance)
        invalid("initial", "state is not normalized: |psi|^2 + |psi0|^2 = " + std::to_string(total));
    return InitialState(std::move(psi), psi0);
}

}  // namespace

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object()) invalid("", "config must be a JSON object");

    SystemHamiltonian system = parse_system(require(doc, "system", ""));
    BathModel bath = parse_bath(require(doc, "bath", ""));
    InitialState initial = parse_initial(require(doc, "initial", ""), std::size_t(system.levels()));

    const json& time = require(doc, "time", "");
    TimeSpec ts;
    ts.t_max = as_number(require(time, "t_max", "time"), "time.t_max");
    if (!(ts.t_max > 0.0)) invalid("time.t_max", "must be > 0");
    ts.points = as_count(require(time, "points", "time"), "time.points");
    if (ts.points < 2) invalid("time.points", "need at least 2 output points");

    RunConfig cfg{std::move(system), std::move(bath), std::move(initial), ts, {}, false, {}, {}};

    if (auto it = doc.find("solver"); it != doc.end() && !it->is_null()) {
        if (auto r = it->find("rtol"); r != it->end()) cfg.solver.rtol = as_number(*r, "solver.rtol");
        if (auto a = it->find("atol"); a != it->end()) cfg.solver.atol = as_number(*a, "solver.atol");
        if (auto s = it->find("oracle_steps"); s != it->end())
            cfg.solver.oracle_steps = as_count(*s, "solver.oracle_steps");
        if (!(cfg.solver.rtol > 0.0)) invalid("solver.rtol", "must be > 0");
        if (!(cfg.solver.atol > 0.0)) invalid("solver.atol", "must be > 0");
        if (cfg.solver.oracle_steps < 10) invalid("solver.oracle_steps", "must be >= 10");
    }
    if (auto it = doc.find("mode"); it != doc.end() && !it->is_null()) {
        if (auto u = it->find("unrenormalized_init"); u != it->end()) {
            if (!u->is_boolean()) invalid("mode.unrenormalized_init", "expected a boolean");
            cfg.unrenormalized_init = u->get<bool>();
        }
    }
    if (auto it = doc.find("cutoff_study"); it != doc.end() && !it->is_null()) {
        if (auto c = it->find("cutoffs"); c != it->end()) {
            if (!c->is_array() || c->empty()) invalid("cutoff_study.cutoffs", "expected a non-empty array");
            cfg.cutoff_study.cutoffs.clear();
            for (std::size_t k = 0; k < c->size(); ++k) {
                const double w = as_number((*c)[k], index_path("cutoff_study.cutoffs", k));
                if (!(w > 0.0)) invalid(index_path("cutoff_study.cutoffs", k), "cutoff must be > 0");
                cfg.cutoff_study.cutoffs.push_back(w);
            }
        }
        if (auto t = it->find("t_from"); t != it->end())
            cfg.cutoff_study.t_from = as_number(*t, "cutoff_study.t_from");
    }
    if (auto it = doc.find("sweep"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) invalid("sweep", "expected an array of axes");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const std::string ap = index_path("sweep", k);
            const json& axis = (*it)[k];
            const json& path = require(axis, "path", ap);
            const json& values = require(axis, "values", ap);
            if (!path.is_string()) invalid(ap + ".path", "expected a JSON pointer string");
            if (!values.is_array() || values.empty()) invalid(ap + ".values", "expected a non-empty array");
            try {
                (void)json::json_pointer(path.get<std::string>());
            } catch (const json::exception&) {
                invalid(ap + ".path", "malformed JSON pointer");
            }
            cfg.sweep.push_back(SweepAxis{path.get<std::string>(), values.get<std::vector<json>>()});
        }
    }
    return cfg;
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(ErrorKind::ParseError, "", e.what());
    }
    return config_from_json(doc);
}

json to_json(const RunConfig& cfg) {
    json doc;
    const auto& m = cfg.system.matrix();
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    doc["system"] = {{"n", m.rows()}, {"matrix", std::move(rows)}};

    json peaks = json::array();
    for (const auto& p : cfg.bath.peaks()) peaks.push_back({{"g", p.g}, {"gamma", p.gamma}, {"epsilon", p.epsilon}});
    doc["bath"] = {{"peaks", std::move(peaks)},
                   {"eta", cfg.bath.eta()},
                   {"cutoff", cfg.bath.cutoff() ? json(*cfg.bath.cutoff()) : json(nullptr)}};

    json psi = json::array();
    for (Eigen::Index i = 0; i < cfg.initial.psi().size(); ++i) psi.push_back(complex_json(cfg.initial.psi()(i)));
    doc["initial"] = {{"psi", std::move(psi)}, {"psi0", complex_json(cfg.initial.psi0())}};
    doc["time"] = {{"t_max", cfg.time.t_max}, {"points", cfg.time.points}};
    doc["solver"] = {{"rtol", cfg.solver.rtol}, {"atol", cfg.solver.atol}, {"oracle_steps", cfg.solver.oracle_steps}};
    doc["mode"] = {{"unrenormalized_init", cfg.unrenormalized_init}};
    doc["cutoff_study"] = {{"cutoffs", cfg.cutoff_study.cutoffs}, {"t_from", cfg.cutoff_study.t_from}};
    if (!cfg.sweep.empty()) {
        json axes = json::array();
        for (const auto& a : cfg.sweep) axes.push_back({{"path", a.path}, {"values", a.values}});
        doc["sweep"] = std::move(axes);
    }
    return doc;
}

}  // namespace nmdyn::cli
