// io.hpp
// External data formats: state specification documents, count-record batches,
// equator-scan documents, witness verdicts, density matrices and grid CSV.
// Schemas for the JSON formats are shipped under schemas/.
#pragma once

#include "spinwig/core.hpp"
#include "spinwig/kernels.hpp"
#include "spinwig/states.hpp"
#include "spinwig/tomography.hpp"
#include "spinwig/wigner.hpp"
#include "spinwig/witness.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace spinwig::io {

using nlohmann::json;

// Schema/parse failure; `where` is a JSON pointer to the offending field.
struct ParseError : std::runtime_error {
    std::string where;
    ParseError(const std::string& where_, const std::string& what_)
        : std::runtime_error(where_.empty() ? what_ : "at " + where_ + ": " + what_),
          where(where_) {}
};

namespace detail {

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
}

inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

inline void save_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline const json& field(const json& j, const std::string& name, const std::string& ptr) {
    if (!j.is_object()) throw ParseError(ptr, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(ptr + "/" + name, "missing required field");
    return *it;
}

inline int int_field(const json& j, const std::string& name, const std::string& ptr) {
    const json& v = field(j, name, ptr);
    if (!v.is_number_integer()) throw ParseError(ptr + "/" + name, "expected an integer");
    return v.get<int>();
}

inline double num_field(const json& j, const std::string& name, const std::string& ptr) {
    const json& v = field(j, name, ptr);
    if (!v.is_number()) throw ParseError(ptr + "/" + name, "expected a number");
    return v.get<double>();
}

inline int qubit_field(const json& j, const std::string& ptr, int minimum) {
    const int n = int_field(j, "n", ptr);
    if (n < minimum || n > kMaxQubits)
        throw ParseError(ptr + "/n", "n must be in [" + std::to_string(minimum) + ", " +
                                         std::to_string(kMaxQubits) + "], got " +
                                         std::to_string(n));
    return n;
}

}  // namespace detail

// A parsed state spec: always usable as a density matrix, with the amplitude
// vector retained when the spec denotes a pure state.
struct ParsedState {
    std::optional<PureState> pure;
    DensityMatrix rho;
};

inline ParsedState parse_state_spec_json(const json& j, const std::string& ptr = "");

namespace detail {

inline ParsedState from_pure(PureState psi) {
    DensityMatrix rho = density(psi);
    return ParsedState{std::move(psi), std::move(rho)};
}

}  // namespace detail

inline ParsedState parse_state_spec_json(const json& j, const std::string& ptr) {
    using detail::field;
    const json& kindj = field(j, "kind", ptr);
    if (!kindj.is_string()) throw ParseError(ptr + "/kind", "expected a string");
    const std::string kind = kindj.get<std::string>();

    if (kind == "ghz") {
        return detail::from_pure(ghz(detail::qubit_field(j, ptr, 2)));
    }
    if (kind == "w") {
        return detail::from_pure(w_state(detail::qubit_field(j, ptr, 2)));
    }
    if (kind == "clock") {
        return detail::from_pure(clock_state(detail::qubit_field(j, ptr, 1)));
    }
    if (kind == "bell") {
        const json& w = field(j, "which", ptr);
        if (!w.is_string()) throw ParseError(ptr + "/which", "expected a string");
        const std::string s = w.get<std::string>();
        BellState which;
        if (s == "phi+") which = BellState::PhiPlus;
        else if (s == "phi-") which = BellState::PhiMinus;
        else if (s == "psi+") which = BellState::PsiPlus;
        else if (s == "psi-") which = BellState::PsiMinus;
        else throw ParseError(ptr + "/which", "expected one of phi+, phi-, psi+, psi-");
        return detail::from_pure(bell(which));
    }
    if (kind == "ghz_family") {
        const int n = detail::qubit_field(j, ptr, 2);
        const double gamma = detail::num_field(j, "gamma", ptr);
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw ParseError(ptr + "/gamma", "gamma must lie in [0, 1]");
        DensityMatrix rho = ghz_family(n, gamma);
        return ParsedState{std::nullopt, std::move(rho)};
    }
    if (kind == "product") {
        const json& a = field(j, "angles", ptr);
        if (!a.is_array() || a.empty())
            throw ParseError(ptr + "/angles", "expected a nonempty array of [polar, azimuth] pairs");
        std::vector<BlochAngles> angles;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const json& pair = a[i];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
                throw ParseError(ptr + "/angles/" + std::to_string(i),
                                 "expected a [polar, azimuth] number pair");
            angles.push_back({pair[0].get<double>(), pair[1].get<double>()});
        }
        if (angles.size() > static_cast<std::size_t>(kMaxQubits))
            throw ParseError(ptr + "/angles", "too many qubits");
        return detail::from_pure(product_state(angles));
    }
    if (kind == "superpose") {
        ParsedState a = parse_state_spec_json(field(j, "a", ptr), ptr + "/a");
        ParsedState b = parse_state_spec_json(field(j, "b", ptr), ptr + "/b");
        if (!a.pure) throw ParseError(ptr + "/a", "superpose requires pure operands");
        if (!b.pure) throw ParseError(ptr + "/b", "superpose requires pure operands");
        return detail::from_pure(superpose(*a.pure, *b.pure));
    }
    if (kind == "mixture") {
        const json& terms = field(j, "terms", ptr);
        if (!terms.is_array() || terms.empty())
            throw ParseError(ptr + "/terms", "expected a nonempty array of terms");
        std::vector<std::pair<double, DensityMatrix>> parts;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tptr = ptr + "/terms/" + std::to_string(i);
            const double w = detail::num_field(terms[i], "weight", tptr);
            ParsedState s = parse_state_spec_json(detail::field(terms[i], "state", tptr),
                                                  tptr + "/state");
            parts.emplace_back(w, std::move(s.rho));
        }
        DensityMatrix rho = mixture(parts);
        return ParsedState{std::nullopt, std::move(rho)};
    }
    throw ParseError(ptr + "/kind", "unknown state kind \"" + kind + "\"");
}

inline ParsedState parse_state_spec(const std::string& text) {
    return parse_state_spec_json(detail::parse_text(text));
}

// ---- phase points -----------------------------------------------------------

inline json phase_point_to_json(const PhasePoint& p) {
    json arr = json::array();
    for (const EulerAngles& a : p) arr.push_back({a.theta, a.phi, a.Phi});
    return arr;
}

inline PhasePoint phase_point_from_json(const json& j, const std::string& ptr) {
    if (!j.is_array() || j.empty()) throw ParseError(ptr, "expected a nonempty array of angle triples");
    PhasePoint p;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& t = j[i];
        if (!t.is_array() || t.size() != 3 || !t[0].is_number() || !t[1].is_number() ||
            !t[2].is_number())
            throw ParseError(ptr + "/" + std::to_string(i), "expected [theta, phi, Phi] numbers");
        p.push_back({t[0].get<double>(), t[1].get<double>(), t[2].get<double>()});
    }
    return p;
}

inline std::vector<PhasePoint> read_phase_points(const std::string& path) {
    const json j = detail::load_file(path);
    const json& arr = j.is_object() && j.contains("points") ? j.at("points") : j;
    if (!arr.is_array() || arr.empty()) throw ParseError("/points", "expected an array of phase points");
    std::vector<PhasePoint> pts;
    for (std::size_t i = 0; i < arr.size(); ++i)
        pts.push_back(phase_point_from_json(arr[i], "/points/" + std::to_string(i)));
    return pts;
}

// ---- count records ----------------------------------------------------------

inline json count_record_to_json(const CountRecord& rec) {
    json counts = json::object();
    const int n = rec.n();
    for (std::size_t idx = 0; idx < rec.counts.size(); ++idx)
        if (rec.counts[idx] > 0) counts[index_to_bitstring(idx, n)] = rec.counts[idx];
    return json{{"angles", phase_point_to_json(rec.setting.point)},
                {"shots", rec.setting.shots},
                {"counts", counts}};
}

inline CountRecord count_record_from_json(const json& j, const std::string& ptr) {
    CountRecord rec;
    rec.setting.point = phase_point_from_json(detail::field(j, "angles", ptr), ptr + "/angles");
    const int n = static_cast<int>(rec.setting.point.size());
    if (n > kMaxQubits) throw ParseError(ptr + "/angles", "too many qubits");
    const json& shots = detail::field(j, "shots", ptr);
    if (!shots.is_number_integer() || shots.get<std::int64_t>() < 1)
        throw ParseError(ptr + "/shots", "shots must be a positive integer");
    rec.setting.shots = shots.get<std::uint64_t>();
    rec.counts.assign(std::size_t{1} << n, 0);
    const json& counts = detail::field(j, "counts", ptr);
    if (!counts.is_object()) throw ParseError(ptr + "/counts", "expected an object");
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        const std::string cptr = ptr + "/counts/" + it.key();
        if (it.key().size() != static_cast<std::size_t>(n))
            throw ParseError(cptr, "bitstring length does not match the angle count");
        std::size_t idx;
        try {
            idx = bitstring_to_index(it.key());
        } catch (const std::invalid_argument& e) {
            throw ParseError(cptr, e.what());
        }
        if (!it.value().is_number_integer() || it.value().get<std::int64_t>() < 0)
            throw ParseError(cptr, "counts must be nonnegative integers");
        rec.counts[idx] = it.value().get<std::uint64_t>();
    }
    if (rec.total() != rec.setting.shots)
        throw ParseError(ptr + "/counts", "counts must sum to shots");
    return rec;
}

inline void write_count_records(const std::vector<CountRecord>& records, const std::string& path) {
    json arr = json::array();
    for (const CountRecord& rec : records) arr.push_back(count_record_to_json(rec));
    detail::save_file(path, arr);
}

// Accepts either the bare array contract or a {"meta":…, "records":[…]} wrapper.
inline std::vector<CountRecord> read_count_records(const std::string& path) {
    const json j = detail::load_file(path);
    const json& arr = j.is_object() && j.contains("records") ? j.at("records") : j;
    if (!arr.is_array()) throw ParseError("", "expected an array of count records");
    std::vector<CountRecord> records;
    for (std::size_t i = 0; i < arr.size(); ++i)
        records.push_back(count_record_from_json(arr[i], "/" + std::to_string(i)));
    return records;
}

// ---- grid CSV ----------------------------------------------------------------

inline void export_grid_csv(const SliceGrid& grid, const std::string& path,
                            const std::vector<std::string>& comments = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const std::string& c : comments) out << "# " << c << '\n';
    out << "axis1,axis2,value\n";
    char buf[96];
    for (std::size_t i = 0; i < grid.axis1.size(); ++i)
        for (std::size_t k = 0; k < grid.axis2.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", grid.axis1[i], grid.axis2[k],
                          grid.at(i, k));
            out << buf << '\n';
        }
}

struct GridRow {
    double axis1, axis2, value;
};

inline std::vector<GridRow> import_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot open " + path);
    std::string line;
    bool saw_header = false;
    std::vector<GridRow> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "axis1,axis2,value") throw ParseError("", "bad CSV header: " + line);
            saw_header = true;
            continue;
        }
        GridRow r{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r.axis1, &r.axis2, &r.value) != 3)
            throw ParseError("", "bad CSV row: " + line);
        rows.push_back(r);
    }
    if (!saw_header) throw ParseError("", "missing CSV header");
    return rows;
}

// ---- scan documents ----------------------------------------------------------

enum class AngleConvention { Paper, Hardware };

inline std::string to_string(AngleConvention c) {
    return c == AngleConvention::Paper ? "paper" : "hardware";
}

inline AngleConvention angle_convention_from_string(const std::string& s) {
    if (s == "paper") return AngleConvention::Paper;
    if (s == "hardware") return AngleConvention::Hardware;
    throw ParseError("/angle_convention", "expected \"paper\" or \"hardware\"");
}

// Scans are stored in their native convention; hardware phases are twice the
// phase-space azimuth (phi_tilde = 2 phi) and get halved on ingestion, so the
// in-memory scan is always in the paper convention.
inline void write_scan_document(const EquatorScanResult& scan, AngleConvention convention,
                                const std::string& path, const json& meta = json()) {
    scan.validate();
    json pts = json::array();
    const double scale = convention == AngleConvention::Hardware ? 2.0 : 1.0;
    for (std::size_t i = 0; i < scan.phi.size(); ++i)
        pts.push_back({{"phi", scale * scan.phi[i]},
                       {"estimate", scan.estimate[i]},
                       {"std_error", scan.std_error[i]}});
    json doc{{"angle_convention", to_string(convention)}, {"points", pts}};
    if (!meta.is_null()) doc["meta"] = meta;
    detail::save_file(path, doc);
}

inline std::pair<EquatorScanResult, AngleConvention> read_scan_document(const std::string& path) {
    const json j = detail::load_file(path);
    const json& conv = detail::field(j, "angle_convention", "");
    if (!conv.is_string()) throw ParseError("/angle_convention", "expected a string");
    const AngleConvention convention = angle_convention_from_string(conv.get<std::string>());
    const json& pts = detail::field(j, "points", "");
    if (!pts.is_array() || pts.empty()) throw ParseError("/points", "expected a nonempty array");
    EquatorScanResult scan;
    const double scale = convention == AngleConvention::Hardware ? 0.5 : 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string ptr = "/points/" + std::to_string(i);
        scan.phi.push_back(scale * detail::num_field(pts[i], "phi", ptr));
        scan.estimate.push_back(detail::num_field(pts[i], "estimate", ptr));
        const double se = detail::num_field(pts[i], "std_error", ptr);
        if (se < 0) throw ParseError(ptr + "/std_error", "std_error must be nonnegative");
        scan.std_error.push_back(se);
    }
    return {std::move(scan), convention};
}

// ---- verdicts and matrices -----------------------------------------------------

// JSON has no infinities; an exact-scan z-score is clamped to +-DBL_MAX.
inline json witness_verdict_to_json(const WitnessVerdict& v, AngleConvention convention) {
    double z = v.z_score;
    if (std::isinf(z)) z = std::copysign(std::numeric_limits<double>::max(), z);
    return json{{"amplitude", v.fitted_amplitude}, {"bound", v.bound},
                {"z_score", z},                    {"entangled", v.entangled},
                {"n", v.n},                        {"threshold_sigma", v.threshold_sigma},
                {"angle_convention", to_string(convention)}};
}

inline json density_to_json(const DensityMatrix& rho) {
    json data = json::array();
    for (Eigen::Index r = 0; r < rho.dim(); ++r)
        for (Eigen::Index c = 0; c < rho.dim(); ++c)
            data.push_back({rho.mat(r, c).real(), rho.mat(r, c).imag()});
    return json{{"n", rho.n}, {"rho", data}};
}

inline DensityMatrix density_from_json(const json& j, const std::string& ptr = "") {
    const int n = detail::qubit_field(j, ptr, 1);
    const json& data = detail::field(j, "rho", ptr);
    const Eigen::Index d = dim_of(n);
    if (!data.is_array() || data.size() != static_cast<std::size_t>(d * d))
        throw ParseError(ptr + "/rho", "expected 4^n [re, im] pairs in row-major order");
    Mat m(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) {
            const json& e = data[static_cast<std::size_t>(r * d + c)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ParseError(ptr + "/rho/" + std::to_string(r * d + c),
                                 "expected an [re, im] pair");
            m(r, c) = cdouble(e[0].get<double>(), e[1].get<double>());
        }
    return DensityMatrix{n, std::move(m)};
}

inline json reconstruction_to_json(const ReconstructionResult& res) {
    json j = density_to_json(res.rho_hat);
    j["residual_norm"] = res.residual_norm;
    j["condition_number"] = res.condition_number;
    j["projected"] = res.projected;
    return j;
}

}  // namespace spinwig::io
