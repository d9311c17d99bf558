// spinwig.cpp
// Command-line front end: state | slice | scan | simulate | reconstruct |
// certify | swcheck. Exit codes: 0 success, 2 usage, 3 data/schema errors,
// 4 numeric/model errors.

#include "spinwig/io.hpp"
#include "spinwig/sampling.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace spinwig;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitModel = 4;

std::string g_command_line;

json make_meta(std::optional<std::uint64_t> seed = std::nullopt) {
    json meta{{"tool", "spinwig"}, {"version", kVersion}, {"command", g_command_line}};
    if (seed) meta["seed"] = *seed;
    return meta;
}

std::vector<std::string> csv_comments(std::optional<std::uint64_t> seed = std::nullopt) {
    std::vector<std::string> c{std::string("spinwig ") + kVersion,
                               "command: " + g_command_line};
    if (seed) c.push_back("seed: " + std::to_string(*seed));
    return c;
}

// A state spec argument is inline JSON or @file.
io::ParsedState load_state(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') return io::parse_state_spec_json(io::detail::load_file(arg.substr(1)));
    return io::parse_state_spec(arg);
}

ParityKind parse_kind(const std::string& s) {
    if (s == "tensor") return ParityKind::TensorSu2;
    if (s == "su2n") return ParityKind::Su2N;
    throw CLI::ValidationError("--kind", "expected tensor or su2n");
}

std::vector<double> linspace_incl(double lo, double hi, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i)
        v.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return v;
}

std::vector<double> linspace_excl(double lo, double hi, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * i / count);
    return v;
}

std::vector<double> equator_phis(int count) {
    return linspace_excl(0.0, std::numbers::pi, count);
}

// Builtin point-set names, or a JSON file of phase points.
std::vector<PhasePoint> resolve_points(const std::string& arg, int n) {
    if (arg.rfind("equator:", 0) == 0) {
        const int count = std::stoi(arg.substr(8));
        if (count < 1) throw std::invalid_argument("equator:<count> needs count >= 1");
        std::vector<PhasePoint> pts;
        for (double f : equator_phis(count)) pts.push_back(equator_point(n, f));
        return pts;
    }
    if (arg == "tetrahedral-grid") return tetrahedral_grid(n);
    if (arg.rfind("raster:", 0) == 0) {
        const int res = std::stoi(arg.substr(7));
        if (res < 1) throw std::invalid_argument("raster:<res> needs res >= 1");
        std::vector<PhasePoint> pts;
        for (double t : linspace_incl(0.0, std::numbers::pi / 2.0, res))
            for (double f : linspace_excl(0.0, std::numbers::pi, res))
                pts.push_back(equal_angle_point(n, t, f));
        return pts;
    }
    std::vector<PhasePoint> pts = io::read_phase_points(arg);
    for (const PhasePoint& p : pts)
        if (static_cast<int>(p.size()) != n)
            throw std::invalid_argument("phase point qubit count does not match the state");
    return pts;
}

EquatorScanResult estimate_scan(const std::vector<CountRecord>& records, ParityKind kind,
                                std::optional<double> correction) {
    EquatorScanResult scan;
    for (const CountRecord& rec : records) {
        const PhasePoint& p = rec.setting.point;
        scan.phi.push_back(p.front().phi);
        const WignerEstimate e = estimate_wigner(rec, kind, correction);
        scan.estimate.push_back(e.value);
        scan.std_error.push_back(e.std_error);
    }
    return scan;
}

// ---- subcommand bodies ------------------------------------------------------

int run_state(const std::string& spec, const std::string& out) {
    const io::ParsedState st = load_state(spec);
    json doc = io::density_to_json(st.rho);
    if (st.pure) {
        json amps = json::array();
        for (Eigen::Index i = 0; i < st.pure->amps.size(); ++i)
            amps.push_back({st.pure->amps(i).real(), st.pure->amps(i).imag()});
        doc["amplitudes"] = amps;
    }
    doc["meta"] = make_meta();
    io::detail::save_file(out, doc);
    return 0;
}

int run_slice(const std::string& spec, const std::string& kind_s, const std::string& slice_s,
              int res, const std::string& out) {
    const io::ParsedState st = load_state(spec);
    const ParityKind kind = parse_kind(kind_s);
    SliceGrid grid;
    if (slice_s == "equal-angle") {
        grid = equal_angle_slice(st.rho, kind, linspace_incl(0.0, std::numbers::pi / 2.0, res),
                                 linspace_excl(0.0, std::numbers::pi, res));
    } else if (slice_s == "theta-theta") {
        const std::vector<double> ts = linspace_excl(0.0, std::numbers::pi, res);
        grid = theta_theta_slice(st.rho, kind, ts, ts);
    } else {
        throw CLI::ValidationError("--slice", "expected equal-angle or theta-theta");
    }
    io::export_grid_csv(grid, out, csv_comments());
    return 0;
}

int run_scan(const std::string& spec, const std::string& kind_s, const std::string& points,
             const std::string& convention_s, const std::string& out) {
    const io::ParsedState st = load_state(spec);
    const ParityKind kind = parse_kind(kind_s);
    if (points.rfind("equator:", 0) != 0)
        throw std::invalid_argument("scan supports equator:<count> point sets");
    const int count = std::stoi(points.substr(8));
    const EquatorScanResult scan = exact_equator_scan(st.rho, kind, equator_phis(count));
    io::write_scan_document(scan, io::angle_convention_from_string(convention_s), out, make_meta());
    return 0;
}

int run_simulate(const std::string& spec, const std::string& points_s, std::uint64_t shots,
                 double readout, double depolarizing, std::uint64_t seed, const std::string& out) {
    const io::ParsedState st = load_state(spec);
    const std::vector<PhasePoint> points = resolve_points(points_s, st.rho.n);
    const NoiseModel noise{readout, depolarizing};
    const std::vector<CountRecord> records = simulate_batch(st.rho, points, shots, noise, seed);
    json arr = json::array();
    for (const CountRecord& rec : records) arr.push_back(io::count_record_to_json(rec));
    io::detail::save_file(out, json{{"meta", make_meta(seed)}, {"records", arr}});
    return 0;
}

int run_reconstruct(const std::string& records_path, const std::string& kind_s, bool project,
                    const std::string& truth_spec, std::optional<double> correction,
                    const std::string& out) {
    const std::vector<CountRecord> records = io::read_count_records(records_path);
    const ParityKind kind = parse_kind(kind_s);
    const ReconstructionResult res = reconstruct_density(records, kind, project, correction);
    json doc = io::reconstruction_to_json(res);
    if (!truth_spec.empty()) {
        const io::ParsedState truth = load_state(truth_spec);
        const DensityMatrix rho_hat =
            res.projected || project ? res.rho_hat : clip_negative_eigenvalues(res.rho_hat);
        doc["fidelity_vs_truth"] = fidelity(rho_hat, truth.rho);
        doc["frobenius_vs_truth"] = frobenius_distance(res.rho_hat, truth.rho);
    }
    doc["meta"] = make_meta();
    io::detail::save_file(out, doc);
    std::printf("rank ok; residual %.3e; condition %.3f; projected %s\n", res.residual_norm,
                res.condition_number, res.projected ? "true" : "false");
    if (doc.contains("fidelity_vs_truth"))
        std::printf("fidelity vs truth: %.6f\n", doc["fidelity_vs_truth"].get<double>());
    return 0;
}

int run_certify(const std::string& scan_path, const std::string& simulate_spec, int n,
                double threshold, const std::string& convention_s, std::uint64_t shots,
                int points, std::uint64_t seed, double readout, double depolarizing,
                std::optional<double> correction, const std::string& out) {
    EquatorScanResult scan;
    io::AngleConvention convention = io::AngleConvention::Paper;
    if (!scan_path.empty()) {
        auto [s, conv] = io::read_scan_document(scan_path);
        scan = std::move(s);
        convention = conv;
        if (!convention_s.empty() && io::angle_convention_from_string(convention_s) != conv)
            throw io::ParseError("/angle_convention",
                                 "scan file is tagged \"" + io::to_string(conv) +
                                     "\" but --angle-convention says \"" + convention_s + "\"");
    } else {
        const io::ParsedState st = load_state(simulate_spec);
        if (st.rho.n != n)
            throw std::invalid_argument("--n does not match the simulated state");
        std::vector<PhasePoint> pts;
        for (double f : equator_phis(points)) pts.push_back(equator_point(n, f));
        const NoiseModel noise{readout, depolarizing};
        scan = estimate_scan(simulate_batch(st.rho, pts, shots, noise, seed),
                             ParityKind::TensorSu2, correction);
        if (!convention_s.empty()) convention = io::angle_convention_from_string(convention_s);
    }
    const WitnessVerdict verdict = certify_ghz_entanglement(scan, n, threshold);
    json doc = io::witness_verdict_to_json(verdict, convention);
    doc["meta"] = make_meta(scan_path.empty() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    io::detail::save_file(out, doc);
    std::printf("amplitude %.6f bound %.6f z %.2f -> %s\n", verdict.fitted_amplitude,
                verdict.bound, verdict.z_score, verdict.entangled ? "entangled" : "not certified");
    return 0;
}

struct SwCheck {
    std::string id;
    std::string status;  // pass | fail | skipped
    double value = 0;
    double tolerance = 0;
    std::string note;
};

int run_swcheck(const std::string& kind_s, int n, const std::string& quad_s, int trials,
                std::uint64_t seed, const std::string& out) {
    const ParityKind kind = parse_kind(kind_s);
    check_qubit_count(n);
    Rng rng(seed);
    std::vector<SwCheck> checks;

    // S-W.1: informational completeness of the tetrahedral grid.
    {
        const Eigen::MatrixXd a = design_matrix(tetrahedral_grid(n), kind, n);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        const int rank = static_cast<int>(qr.rank());
        const int want = 1 << (2 * n);
        checks.push_back({"S-W.1 completeness", rank == want ? "pass" : "fail",
                          static_cast<double>(rank), static_cast<double>(want),
                          "design-matrix rank on the 4^n tetrahedral grid"});
    }
    // S-W.2: Hermiticity of the displaced kernel.
    {
        double worst = 0;
        for (int t = 0; t < trials; ++t) {
            const Mat k = kernel_at(random_phase_point(n, rng), kind);
            worst = std::max(worst, (k - k.adjoint()).cwiseAbs().maxCoeff());
        }
        checks.push_back({"S-W.2 hermiticity", worst < 1e-12 ? "pass" : "fail", worst, 1e-12, ""});
    }
    // S-W.3 / S-W.4 need the measure; defined for the tensor kernel only.
    const bool quad_ok = n <= 3;
    Quadrature q = [&] {
        if (!quad_s.empty()) {
            const auto x = quad_s.find('x');
            if (x == std::string::npos)
                throw std::invalid_argument("--quadrature expects <theta-nodes>x<phi-nodes>");
            return Quadrature::product(n, std::stoi(quad_s.substr(0, x)),
                                       std::stoi(quad_s.substr(x + 1)));
        }
        return n <= 2 ? Quadrature::defaults(n) : Quadrature::product(n, 6, 6);
    }();
    if (kind != ParityKind::TensorSu2) {
        checks.push_back({"S-W.3 identity integral", "skipped", 0, 0, "measure unspecified"});
        checks.push_back({"S-W.4 overlap", "skipped", 0, 0, "measure unspecified"});
    } else if (!quad_ok) {
        checks.push_back({"S-W.3 identity integral", "skipped", 0, 0, "n > 3"});
        checks.push_back({"S-W.4 overlap", "skipped", 0, 0, "n > 3"});
    } else {
        const double tol3 = n == 1 ? 1e-11 : 1e-9;
        const Mat id = integrate_kernel(kind, n, q);
        const double err3 = (id - Mat::Identity(id.rows(), id.cols())).cwiseAbs().maxCoeff();
        checks.push_back({"S-W.3 identity integral", err3 < tol3 ? "pass" : "fail", err3, tol3, ""});

        const double tol4 = n == 1 ? 1e-9 : 1e-8;
        double worst = 0;
        const int pairs = std::max(1, trials / 5);
        for (int t = 0; t < pairs; ++t) {
            const DensityMatrix r1 = random_density(n, rng);
            const DensityMatrix r2 =
                t % 2 == 0 ? random_density(n, rng) : density(random_pure(n, rng));
            const double lhs = overlap_integral(r1, r2, kind, q);
            const double rhs = (r1.mat * r2.mat).trace().real();
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        checks.push_back({"S-W.4 overlap", worst < tol4 ? "pass" : "fail", worst, tol4,
                          std::to_string(pairs) + " random state pairs"});
    }
    // S-W.5: z-rotation covariance as an azimuthal shift.
    {
        double worst = 0;
        for (int t = 0; t < trials; ++t) {
            const DensityMatrix rho = random_density(n, rng);
            PhasePoint p = random_phase_point(n, rng);
            const int qubit = static_cast<int>(rng.raw() % static_cast<std::uint64_t>(n));
            const double alpha = rng.uniform(0.0, 2.0 * std::numbers::pi);
            Mat v = Mat::Identity(dim_of(n), dim_of(n));
            {
                PhasePoint zrot(static_cast<std::size_t>(n));
                zrot[static_cast<std::size_t>(qubit)] = EulerAngles{0.0, alpha, 0.0};
                v = composite_rotation(zrot);
            }
            const DensityMatrix rotated{n, v * rho.mat * v.adjoint()};
            const double lhs = wigner_at(rotated, p, kind);
            p[static_cast<std::size_t>(qubit)].phi -= alpha;
            const double rhs = wigner_at(rho, p, kind);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        checks.push_back({"S-W.5 covariance", worst < 1e-12 ? "pass" : "fail", worst, 1e-12,
                          "z-rotation vs phi shift"});
    }
    // Third Euler angles must not matter.
    {
        double worst = 0;
        for (int t = 0; t < trials; ++t) {
            PhasePoint p = random_phase_point(n, rng, false);
            const Mat base = kernel_at(p, kind);
            for (EulerAngles& a : p) a.Phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
            worst = std::max(worst, (kernel_at(p, kind) - base).cwiseAbs().maxCoeff());
        }
        checks.push_back({"Phi-independence", worst < 1e-13 ? "pass" : "fail", worst, 1e-13, ""});
    }

    bool any_fail = false;
    std::printf("%-26s %-8s %-14s %-14s %s\n", "check", "status", "value", "tolerance", "note");
    json jchecks = json::array();
    for (const SwCheck& c : checks) {
        any_fail = any_fail || c.status == "fail";
        std::printf("%-26s %-8s %-14.3e %-14.3e %s\n", c.id.c_str(), c.status.c_str(), c.value,
                    c.tolerance, c.note.c_str());
        jchecks.push_back({{"id", c.id}, {"status", c.status}, {"value", c.value},
                           {"tolerance", c.tolerance}, {"note", c.note}});
    }
    if (!out.empty())
        io::detail::save_file(out, json{{"meta", make_meta(seed)}, {"kind", kind_s}, {"n", n},
                                        {"checks", jchecks}});
    return any_fail ? kExitModel : 0;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) {
        if (i) g_command_line += ' ';
        g_command_line += argv[i];
    }

    CLI::App app{"spin Wigner functions of N-qubit states: evaluation, simulated measurement, "
                 "reconstruction and GHZ entanglement certification"};
    app.require_subcommand(1);

    // state
    std::string spec, out;
    auto* c_state = app.add_subcommand("state", "validate a state spec and write it as JSON");
    c_state->add_option("--spec", spec, "state spec (inline JSON or @file)")->required();
    c_state->add_option("--out", out, "output JSON path")->required();

    // slice
    std::string kind_s = "tensor", slice_s = "equal-angle";
    int res = 64;
    auto* c_slice = app.add_subcommand("slice", "evaluate a 2D Wigner slice to CSV");
    c_slice->add_option("--state", spec, "state spec (inline JSON or @file)")->required();
    c_slice->add_option("--kind", kind_s, "parity kind: tensor | su2n (default tensor)");
    c_slice->add_option("--slice", slice_s,
                        "equal-angle (theta in [0,pi/2] radians x phi in [0,pi)) | theta-theta "
                        "(two-qubit, thetas in [0,pi) radians)");
    c_slice->add_option("--res", res, "grid resolution per axis (cells)")
        ->check(CLI::Range(1, 4096));
    c_slice->add_option("--out", out, "output CSV path")->required();

    // scan
    std::string points_s = "equator:50", convention_s = "paper";
    auto* c_scan = app.add_subcommand("scan", "exact equator scan to a scan document");
    c_scan->add_option("--state", spec, "state spec (inline JSON or @file)")->required();
    c_scan->add_option("--kind", kind_s, "parity kind: tensor | su2n (default tensor)");
    c_scan->add_option("--points", points_s, "equator:<count> phi samples on [0,pi) radians");
    c_scan->add_option("--angle-convention", convention_s,
                       "phi units written to the document: paper | hardware (phi_tilde = 2 phi)");
    c_scan->add_option("--out", out, "output scan JSON path")->required();

    // simulate
    std::uint64_t shots = 8192, seed = 1;
    double readout = 0.0, depolarizing = 0.0;
    auto* c_sim = app.add_subcommand("simulate", "sample measurement counts for a point set");
    c_sim->add_option("--state", spec, "state spec (inline JSON or @file)")->required();
    c_sim->add_option("--points", points_s,
                      "equator:<count> | tetrahedral-grid | raster:<res> | phase-point JSON file")
        ->required();
    c_sim->add_option("--shots", shots, "shots per setting (counts)")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    c_sim->add_option("--readout-error", readout, "per-qubit readout flip probability in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    c_sim->add_option("--depolarizing", depolarizing,
                      "per-qubit depolarizing probability in [0,1] applied before rotation")
        ->check(CLI::Range(0.0, 1.0));
    c_sim->add_option("--seed", seed, "RNG seed (64-bit); per-setting seeds are derived");
    c_sim->add_option("--out", out, "output records JSON path")->required();

    // reconstruct
    std::string records_path, truth_spec;
    bool project = false;
    double correction_eps = -1;
    auto* c_rec = app.add_subcommand("reconstruct", "least-squares density-matrix reconstruction");
    c_rec->add_option("--records", records_path, "count records JSON path")->required();
    c_rec->add_option("--kind", kind_s, "parity kind: tensor | su2n (default tensor)");
    c_rec->add_flag("--project", project, "project the estimate onto the PSD cone");
    c_rec->add_option("--truth", truth_spec, "state spec to report fidelity against");
    c_rec->add_option("--readout-correction", correction_eps,
                      "invert a per-qubit readout confusion matrix with this epsilon in [0,0.5)")
        ->check(CLI::Range(0.0, 0.499999));
    c_rec->add_option("--out", out, "output JSON path")->required();

    // certify
    std::string scan_path, simulate_spec;
    int nq = 0, points_count = 50;
    double threshold = 5.0;
    std::string cert_convention;
    auto* c_cert = app.add_subcommand("certify", "GHZ-type entanglement verdict from an equator scan");
    auto* o_scan = c_cert->add_option("--scan", scan_path, "scan document JSON path");
    auto* o_simf = c_cert->add_option("--simulate-from", simulate_spec,
                                      "state spec to simulate a scan from (tensor kind)");
    o_scan->excludes(o_simf);
    c_cert->add_option("--n", nq, "qubit count")->required()->check(CLI::Range(2, kMaxQubits));
    c_cert->add_option("--threshold", threshold, "certification threshold in sigmas");
    c_cert->add_option("--angle-convention", cert_convention,
                       "paper | hardware; must match a scan file's tag");
    c_cert->add_option("--shots", shots, "shots per point (simulate-from)")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    c_cert->add_option("--points", points_count, "phi samples on [0,pi) (simulate-from)")
        ->check(CLI::Range(1, 1 << 20));
    c_cert->add_option("--seed", seed, "RNG seed (simulate-from)");
    c_cert->add_option("--readout-error", readout, "per-qubit readout flip probability in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    c_cert->add_option("--depolarizing", depolarizing, "per-qubit depolarizing probability in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    c_cert->add_option("--readout-correction", correction_eps,
                       "invert readout confusion with this epsilon in [0,0.5)")
        ->check(CLI::Range(0.0, 0.499999));
    c_cert->add_option("--out", out, "output verdict JSON path")->required();

    // swcheck
    int trials = 100;
    std::string quad_s;
    auto* c_sw = app.add_subcommand("swcheck", "Stratonovich-Weyl property suite");
    c_sw->add_option("--kind", kind_s, "parity kind: tensor | su2n")->required();
    c_sw->add_option("--n", nq, "qubit count")->required()->check(CLI::Range(1, kMaxQubits));
    c_sw->add_option("--quadrature", quad_s, "<theta-nodes>x<phi-nodes> per qubit");
    c_sw->add_option("--trials", trials, "random trials per property")->check(CLI::Range(1, 100000));
    c_sw->add_option("--seed", seed, "RNG seed for the random trials");
    c_sw->add_option("--out", out, "machine-readable results JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (app.got_subcommand(c_state)) return run_state(spec, out);
        if (app.got_subcommand(c_slice)) return run_slice(spec, kind_s, slice_s, res, out);
        if (app.got_subcommand(c_scan)) return run_scan(spec, kind_s, points_s, convention_s, out);
        if (app.got_subcommand(c_sim))
            return run_simulate(spec, points_s, shots, readout, depolarizing, seed, out);
        if (app.got_subcommand(c_rec))
            return run_reconstruct(records_path, kind_s, project, truth_spec,
                                   correction_eps >= 0 ? std::optional<double>(correction_eps)
                                                       : std::nullopt,
                                   out);
        if (app.got_subcommand(c_cert)) {
            if (scan_path.empty() && simulate_spec.empty())
                throw CLI::ValidationError("certify", "need --scan or --simulate-from");
            return run_certify(scan_path, simulate_spec, nq, threshold, cert_convention, shots,
                               points_count, seed, readout, depolarizing,
                               correction_eps >= 0 ? std::optional<double>(correction_eps)
                                                   : std::nullopt,
                               out);
        }
        if (app.got_subcommand(c_sw)) return run_swcheck(kind_s, nq, quad_s, trials, seed, out);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const io::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const not_informationally_complete& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitModel;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitModel;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitModel;
    }
    return 0;
}
