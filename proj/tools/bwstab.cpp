// Command-line front end.
//
// Subcommands: mixed-area, deficit, hexagons, dtr, verify-lemma,
// stability-scan, deform.  Exit codes are a stable contract:
//   0  success / verified
//   1  assertion failed (chain or certificate violation, no admissible move)
//   2  input error (bad flags, unreadable or malformed polygon files)
//   3  budget exhausted (subset cap, non-converged rotation scan)
// JSON reports (--out) are schema-versioned and byte-identical for identical
// inputs and seed.  Wall-clock time therefore goes to stdout only, never
// into a report file.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bwstab/deformation.hpp"
#include "bwstab/dtr.hpp"
#include "bwstab/errors.hpp"
#include "bwstab/hexagon.hpp"
#include "bwstab/mixed_area.hpp"
#include "bwstab/polygon_io.hpp"
#include "bwstab/verifier.hpp"

namespace {

using namespace bwstab;

constexpr double kPi = 3.14159265358979323846;

void write_report(const std::string& path, const std::string& json) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError(path + ": cannot open output file");
    out << json << "\n";
    if (!out) throw DomainError(path + ": write failed");
}

double lw_ratio(const ConvexPolygon& p) {
    const double l = perimeter(p);
    return l * l / mixed_area_minkowski(p, reflect(p));
}

// ---------------------------------------------------------------- mixed-area

int cmd_mixed_area(const std::string& path_p, const std::string& path_q,
                   const std::string& method, const std::string& out) {
    const ConvexPolygon p = read_polygon(path_p), q = read_polygon(path_q);
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").integer(kReportSchemaVersion);
    w.key("command").string("mixed-area");
    w.key("p").string(path_p).key("q").string(path_q).key("method").string(method);
    if (method == "all") {
        const double mink = mixed_area_minkowski(p, q);
        const double bet = mixed_area_betke(p, q);
        const double orc = mixed_area_oracle(p, q);
        const double disc = std::max({std::fabs(mink - bet), std::fabs(mink - orc),
                                      std::fabs(bet - orc)});
        std::cout << "minkowski = " << fmt17(mink) << "\n"
                  << "betke     = " << fmt17(bet) << "\n"
                  << "oracle    = " << fmt17(orc) << "\n"
                  << "max_discrepancy = " << fmt17(disc) << "\n";
        w.key("minkowski").number(mink).key("betke").number(bet).key("oracle").number(orc);
        w.key("max_discrepancy").number(disc);
    } else {
        const double v = method == "minkowski" ? mixed_area_minkowski(p, q)
                        : method == "betke"    ? mixed_area_betke(p, q)
                                               : mixed_area_oracle(p, q);
        std::cout << fmt17(v) << "\n";
        w.key("value").number(v);
    }
    w.end_object();
    write_report(out, w.str());
    return 0;
}

// ------------------------------------------------------------------- deficit

int cmd_deficit(const std::string& path, const std::string& out) {
    const ConvexPolygon p = read_polygon(path);
    const double l = perimeter(p);
    const double a = mixed_area_minkowski(p, reflect(p));
    const double d = bw_deficit(p);
    std::cout << fmt17(d) << "\n";
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").integer(kReportSchemaVersion);
    w.key("command").string("deficit").key("input").string(path);
    w.key("perimeter").number(l).key("mixed_area").number(a).key("deficit").number(d);
    w.end_object();
    write_report(out, w.str());
    return 0;
}

// ------------------------------------------------------------------ hexagons

int cmd_hexagons(const std::string& path, const std::string& out) {
    const ConvexPolygon p = read_polygon(path);
    const ChainReport rep = chain_check(p);  // throws InvariantViolation on chain failure
    const HexagonDecomposition& d = rep.dec;
    std::cout << "t = (" << fmt17(d.t[0]) << ", " << fmt17(d.t[1]) << ", " << fmt17(d.t[2])
              << ")\n"
              << "deficit: input = " << fmt17(rep.deficit_k)
              << ", H1 = " << fmt17(rep.deficit_h1) << ", H0 = " << fmt17(rep.deficit_h0)
              << "\n";
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").integer(kReportSchemaVersion);
    w.key("command").string("hexagons").key("input").string(path);
    w.key("triangle").points(d.T.vertices());
    w.key("a").begin_array();
    for (double v : d.a) w.number(v);
    w.end_array();
    w.key("h").begin_array();
    for (double v : d.h) w.number(v);
    w.end_array();
    w.key("t").begin_array();
    for (double v : d.t) w.number(v);
    w.end_array();
    w.key("w").begin_array();
    for (const auto& row : d.w) {
        w.begin_array();
        for (const auto& pt : row) w.point(pt);
        w.end_array();
    }
    w.end_array();
    w.key("q").begin_array();
    for (const auto& pt : d.q) w.point(pt);
    w.end_array();
    w.key("p").begin_array();
    for (const auto& pt : d.p) w.point(pt);
    w.end_array();
    w.key("h1").points(d.H1.vertices());
    w.key("h2").points(d.H2.vertices());
    w.key("h0").points(d.h0);
    w.key("h0_convex").boolean(d.h0_convex);
    w.key("perimeter_h0").number(d.perimeter_h0);
    w.key("deficit_input").number(rep.deficit_k);
    w.key("deficit_h1").number(rep.deficit_h1);
    w.key("deficit_h0").number(rep.deficit_h0);
    w.end_object();
    write_report(out, w.str());
    return 0;
}

// ----------------------------------------------------------------------- dtr

int cmd_dtr(const std::string& path, double tol, const std::string& out) {
    const ConvexPolygon p = read_polygon(path);
    const TriangleFit fit = triangle_distance(p, tol);
    std::cout << "APPROXIMATE d_tr = " << fmt17(fit.rho) << " (rotation " << fmt17(fit.theta)
              << ")\n";
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").integer(kReportSchemaVersion);
    w.key("command").string("dtr").key("input").string(path);
    w.key("status").string("APPROXIMATE");
    w.key("rho").number(fit.rho).key("theta").number(fit.theta);
    w.key("triangle").points(fit.triangle.vertices());
    w.key("tol").number(tol);
    w.end_object();
    write_report(out, w.str());
    return 0;
}

// -------------------------------------------------------------- verify-lemma

int cmd_verify_lemma(const std::string& ineq, int max_depth, long long max_subsets, int workers,
                     int verbosity, const std::string& out) {
    VerifyConfig cfg;
    cfg.form = ineq == "quadratic" ? IneqForm::Quadratic : IneqForm::Norm;
    cfg.max_depth = max_depth;
    cfg.max_subsets = max_subsets;
    cfg.workers = workers;
    cfg.verbosity = verbosity;
    std::ofstream log;
    if (verbosity > 0) {
        const char* dir = std::getenv("BW_LOG_DIR");
        const std::string log_path =
            std::string(dir && *dir ? dir : ".") + "/verify-lemma-" + ineq + ".log";
        log.open(log_path);
        if (!log) throw DomainError(log_path + ": cannot open log file");
        log << "log_format_version 1\n";
        cfg.log = &log;
        std::cerr << "run log: " << log_path << "\n";
    }
    const VerifyReport rep = verify_lemma(cfg);
    const char* status = rep.status == VerifyStatus::Verified   ? "VERIFIED"
                         : rep.status == VerifyStatus::Failed   ? "FAILED"
                                                                : "BUDGET_EXCEEDED";
    const long long reference = cfg.form == IneqForm::Quadratic ? 25880 : 2440;
    const char* reference_time = cfg.form == IneqForm::Quadratic ? "8m14s" : "46s";
    std::cout << "status: " << status << "\n"
              << "subsets_processed: " << rep.subsets_processed << "\n"
              << "max_depth_reached: " << rep.max_depth_reached << "\n"
              << "wall_time_seconds: " << fmt17(rep.wall_time_seconds) << "\n"
              << "reference run (not asserted): " << reference << " subsets, " << reference_time
              << "\n";
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").integer(kReportSchemaVersion);
    w.key("command").string("verify-lemma").key("ineq").string(ineq);
    w.key("status").string(status);
    w.key("subsets_processed").integer(rep.subsets_processed);
    w.key("max_depth_reached").integer(rep.max_depth_reached);
    w.key("reference_subsets").integer(reference);
    w.key("frontier").begin_array();
    for (const auto& task : rep.frontier) {
        w.begin_object();
        w.key("wbox").begin_array();
        for (std::size_t i = 0; i < 5; ++i) w.interval(task.wbox[i].lo, task.wbox[i].hi);
        w.end_array();
        w.key("face").integer(task.face);
        w.key("vbox").begin_array();
        for (const auto& iv : task.vbox) w.interval(iv.lo, iv.hi);
        w.end_array();
        w.key("depth").integer(task.depth);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    write_report(out, w.str());
    if (rep.status == VerifyStatus::Verified) return 0;
    return rep.status == VerifyStatus::Failed ? 1 : 3;
}

// ------------------------------------------------------------ stability-scan

int cmd_stability_scan(int n, unsigned long long seed, const std::string& out) {
    if (n <= 0) throw DomainError("stability-scan: sample count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rot(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> jitter_amp(1e-5, 1e-4);
    std::uniform_real_distribution<double> bump_eps(1e-9, 5e-7);

    JsonWriter w;
    w.begin_object();
    w.key("schema_version").integer(kReportSchemaVersion);
    w.key("command").string("stability-scan");
    w.key("n").integer(n).key("seed").integer(static_cast<long long>(seed));
    w.key("rows").begin_array();

    std::printf("%5s  %13s  %13s  %13s  %4s  %s\n", "index", "eps", "dtr", "400*sqrt(eps)",
                "hyp", "ok");
    int violations = 0;
    for (int idx = 0; idx < n; ++idx) {
        // near-regular triangle: jittered corners plus a small bump per side
        const double phi = rot(rng);
        std::vector<Vec2> corners;
        const double amp = jitter_amp(rng);
        for (int j = 0; j < 3; ++j) {
            const double a = phi + 2.0 * kPi * j / 3.0;
            corners.push_back(
                {std::cos(a) + amp * unit(rng), std::sin(a) + amp * unit(rng)});
        }
        std::vector<Vec2> pts = corners;
        for (int j = 0; j < 3; ++j) {
            const Vec2 a = corners[static_cast<std::size_t>(j)];
            const Vec2 b = corners[static_cast<std::size_t>((j + 1) % 3)];
            const Vec2 d = b - a;
            const Vec2 outward = Vec2{d.y, -d.x} * (1.0 / d.norm());
            pts.push_back((a + b) * 0.5 + outward * std::sqrt(bump_eps(rng)));
        }
        const ConvexPolygon k = convex_hull(pts);
        const double dtr = triangle_distance(k).rho;
        const double l = perimeter(k);
        const double eps =
            l * l / (6.0 * std::sqrt(3.0) * mixed_area_minkowski(k, reflect(k))) - 1.0;
        const double bound = 400.0 * std::sqrt(std::max(eps, 0.0));
        const bool hypothesis = dtr <= 1.0 / 36.0 && eps <= 1.0 / (1080.0 * 1080.0);
        const bool ok = dtr <= bound;
        violations += ok ? 0 : 1;
        std::printf("%5d  %13.6e  %13.6e  %13.6e  %4s  %s\n", idx, eps, dtr, bound,
                    hypothesis ? "yes" : "no", ok ? "yes" : "NO");
        w.begin_object();
        w.key("index").integer(idx);
        w.key("eps").number(eps).key("dtr").number(dtr).key("bound").number(bound);
        w.key("hypothesis_ok").boolean(hypothesis).key("ok").boolean(ok);
        w.end_object();
    }
    w.end_array();
    w.key("violations").integer(violations);
    w.end_object();
    std::printf("violations: %d / %d\n", violations, n);
    write_report(out, w.str());
    return violations == 0 ? 0 : 1;
}

// -------------------------------------------------------------------- deform

std::optional<ConvexPolygon> equiangular_descent(const ConvexPolygon& p) {
    const auto fan = edge_fan(p);
    const int k = static_cast<int>(fan.size());
    if (k < 5 || k % 2 == 0) return std::nullopt;
    for (int i = 0; i < k; ++i) {  // equal exterior angles?
        const Vec2 a = fan[static_cast<std::size_t>(i)].normal;
        const Vec2 b = fan[static_cast<std::size_t>((i + 1) % k)].normal;
        if (std::fabs(std::atan2(cross(a, b), dot(a, b)) - 2.0 * kPi / k) > 1e-9)
            return std::nullopt;
    }
    std::vector<double> e;
    double min_side = fan[0].length;
    for (const auto& edge : fan) {
        e.push_back(edge.length);
        min_side = std::min(min_side, edge.length);
    }
    const EquiangularPolygon eq(k, std::move(e), std::atan2(fan[0].normal.y, fan[0].normal.x));
    int best_i = 0;
    double best = 0.0;
    for (int i = 0; i < k; ++i) {
        const double d = ratio_derivative(eq, i);
        if (std::fabs(d) > std::fabs(best)) best = d, best_i = i;
    }
    if (std::fabs(best) <= 1e-12) return std::nullopt;  // regular: critical point
    const double base_ratio = lw_ratio(p);
    double step = (best > 0.0 ? 1.0 : -1.0) * 1e-3 * min_side;
    for (int halvings = 0; halvings < 60; ++halvings, step *= 0.5) {
        try {
            ConvexPolygon cand = perturb_side(eq, best_i, step);
            if (lw_ratio(cand) < base_ratio) return cand;
        } catch (const DomainError&) {
        }
    }
    return std::nullopt;
}

int cmd_deform(const std::string& path, const std::string& out) {
    const ConvexPolygon p = read_polygon(path);
    const double l0 = perimeter(p), a0 = mixed_area_minkowski(p, reflect(p));
    std::string move;
    std::optional<ConvexPolygon> result;
    try {
        result = case1_move(p);
        move = "case1";
    } catch (const NotApplicable&) {
    }
    if (!result) {
        try {
            result = case2_move(p);
            move = "case2";
        } catch (const NotApplicable&) {
        }
    }
    if (!result) {
        result = equiangular_descent(p);
        move = "side";
    }
    if (!result)
        throw NotApplicable("deform: no admissible move; the polygon may be extremal");
    const double l1 = perimeter(*result), a1 = mixed_area_minkowski(*result, reflect(*result));
    std::cout << "move: " << move << "\n"
              << "L^2/A: " << fmt17(l0 * l0 / a0) << " -> " << fmt17(l1 * l1 / a1) << "\n";
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").integer(kReportSchemaVersion);
    w.key("command").string("deform").key("input").string(path);
    w.key("move").string(move);
    w.key("perimeter_before").number(l0).key("mixed_area_before").number(a0);
    w.key("ratio_before").number(l0 * l0 / a0);
    w.key("perimeter_after").number(l1).key("mixed_area_after").number(a1);
    w.key("ratio_after").number(l1 * l1 / a1);
    w.key("vertices").points(result->vertices());
    w.end_object();
    write_report(out, w.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed areas, sandwich decompositions and certified Hessian bounds for the "
                 "Betke-Weil inequality L(K)^2 >= 6*sqrt(3)*A(K,-K)"};
    app.require_subcommand(1);
    int verbosity = 0;
    app.add_flag("-v", verbosity, "increase verbosity (-vv for per-subset logs)");

    std::string path_p, path_q, method = "all", ineq = "quadratic", out;
    double tol = 1e-9;
    int max_depth = 60, workers = 1, scan_n = 200;
    long long max_subsets = 1'000'000;
    unsigned long long seed = 20260815ULL;

    auto* sub_mixed = app.add_subcommand("mixed-area", "mixed area of two polygons");
    sub_mixed->add_option("p", path_p, "first polygon JSON file")->required();
    sub_mixed->add_option("q", path_q, "second polygon JSON file")->required();
    sub_mixed->add_option("--method", method, "minkowski | betke | oracle | all")
        ->check(CLI::IsMember({"minkowski", "betke", "oracle", "all"}));
    sub_mixed->add_option("--out", out, "write JSON report here");
    sub_mixed->fallthrough();

    auto* sub_deficit = app.add_subcommand("deficit", "L(K)^2 - 6*sqrt(3)*A(K,-K)");
    sub_deficit->add_option("poly", path_p, "polygon JSON file")->required();
    sub_deficit->add_option("--out", out, "write JSON report here");
    sub_deficit->fallthrough();

    auto* sub_hex = app.add_subcommand("hexagons", "triangle/hexagon sandwich decomposition");
    sub_hex->add_option("poly", path_p, "polygon JSON file")->required();
    sub_hex->add_option("--out", out, "write JSON report here");
    sub_hex->fallthrough();

    auto* sub_dtr = app.add_subcommand("dtr", "approximate triangle sandwich distance");
    sub_dtr->add_option("poly", path_p, "polygon JSON file")->required();
    sub_dtr->add_option("--tol", tol, "rotation-scan convergence tolerance");
    sub_dtr->add_option("--out", out, "write JSON report here");
    sub_dtr->fallthrough();

    auto* sub_verify = app.add_subcommand("verify-lemma", "certified Hessian bound over the "
                                                          "parameter domain");
    sub_verify->add_option("--ineq", ineq, "quadratic | norm")
        ->check(CLI::IsMember({"quadratic", "norm"}));
    sub_verify->add_option("--max-depth", max_depth, "bisection depth cap");
    sub_verify->add_option("--max-subsets", max_subsets, "processed-subset budget");
    sub_verify->add_option("--workers", workers, "certificate worker threads");
    sub_verify->add_option("--out", out, "write JSON report here");
    sub_verify->fallthrough();

    auto* sub_scan = app.add_subcommand("stability-scan",
                                        "d_tr <= 400*sqrt(eps) over random near-triangles");
    sub_scan->add_option("--n", scan_n, "number of samples");
    sub_scan->add_option("--seed", seed, "random seed");
    sub_scan->add_option("--out", out, "write JSON report here");
    sub_scan->fallthrough();

    auto* sub_deform = app.add_subcommand("deform", "find a move that lowers L^2/A(P,-P)");
    sub_deform->add_option("poly", path_p, "polygon JSON file")->required();
    sub_deform->add_option("--out", out, "write JSON report here");
    sub_deform->fallthrough();

    try {
        app.parse(argc, argv);
        if (sub_mixed->parsed()) return cmd_mixed_area(path_p, path_q, method, out);
        if (sub_deficit->parsed()) return cmd_deficit(path_p, out);
        if (sub_hex->parsed()) return cmd_hexagons(path_p, out);
        if (sub_dtr->parsed()) return cmd_dtr(path_p, tol, out);
        if (sub_verify->parsed())
            return cmd_verify_lemma(ineq, max_depth, max_subsets, workers, verbosity, out);
        if (sub_scan->parsed()) return cmd_stability_scan(scan_n, seed, out);
        if (sub_deform->parsed()) return cmd_deform(path_p, out);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0; malformed invocations are input errors
    } catch (const bwstab::DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const bwstab::ApproximationError& e) {
        std::cerr << "budget exhausted: " << e.what() << " (best value "
                  << bwstab::fmt17(e.best_value) << ")\n";
        return 3;
    } catch (const bwstab::InvariantViolation& e) {
        std::cerr << "assertion failed: " << e.what() << "\n";
        return 1;
    } catch (const bwstab::NotApplicable& e) {
        std::cerr << "assertion failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
