// sscode: construct and verify sparse-array geometries, report subspace
// distance bounds, and benchmark the DoA decoders over seeded Monte Carlo
// sweeps.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssc/channel.hpp"
#include "ssc/codebook.hpp"
#include "ssc/decode.hpp"
#include "ssc/distance.hpp"
#include "ssc/geometry.hpp"
#include "ssc/kernels.hpp"
#include "ssc/sim.hpp"

namespace {

// Relative output paths live under SSC_OUT_DIR when it is set.
std::string resolve_out_path(const std::string& path) {
    const char* dir = std::getenv("SSC_OUT_DIR");
    if (!dir || !*dir || path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(dir) / p).string();
}

std::uint32_t default_threads() {
    if (const char* env = std::getenv("SSC_THREADS")) {
        const unsigned long v = std::strtoul(env, nullptr, 10);
        if (v > 0) return std::uint32_t(v);
    }
    return 0;  // auto
}

double parse_snr_value(const std::string& token) {
    if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("bad SNR value \"" + token + "\"");
    return v;
}

// "lo:step:hi" (inclusive) or a comma-separated list.
std::vector<double> parse_snr_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string lo_s, step_s, hi_s;
        if (!std::getline(ss, lo_s, ':') || !std::getline(ss, step_s, ':') ||
            !std::getline(ss, hi_s)) {
            throw std::invalid_argument("SNR range must be lo:step:hi");
        }
        const double lo = parse_snr_value(lo_s);
        const double step = parse_snr_value(step_s);
        const double hi = parse_snr_value(hi_s);
        if (!(step > 0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
            throw std::invalid_argument("SNR range must satisfy lo <= hi, step > 0");
        }
        for (int i = 0;; ++i) {
            const double v = lo + step * i;
            if (v > hi + 1e-9) break;
            out.push_back(v);
        }
    } else {
        std::stringstream ss(text);
        std::string token;
        while (std::getline(ss, token, ',')) {
            if (!token.empty()) out.push_back(parse_snr_value(token));
        }
    }
    if (out.empty()) throw std::invalid_argument("empty SNR grid");
    return out;
}

std::vector<ssc::DecoderSpec> parse_decoder_list(const std::string& text) {
    std::vector<ssc::DecoderSpec> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(ssc::parse_decoder_spec(token));
    }
    if (out.empty()) throw std::invalid_argument("empty decoder list");
    return out;
}

std::optional<ssc::SourceMode> parse_source_mode(const std::string& text) {
    if (text == "auto") return std::nullopt;
    if (text == "fixed") return ssc::SourceMode::fixed_unit;
    if (text == "random") return ssc::SourceMode::random_phase;
    throw std::invalid_argument("source mode must be auto, fixed, or random");
}

ssc::ArrayGeometry resolve_geometry(std::uint32_t m, const std::string& file) {
    if (!file.empty()) return ssc::load_geometry_file(file);
    return ssc::bose_chowla_set(m);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Bose-Chowla sensing subspace codes: geometry construction, "
                 "distance bounds, and DoA decoder benchmarks"};
    app.require_subcommand(1);

    // ---- geometry ----------------------------------------------------------
    auto* cmd_geometry = app.add_subcommand("geometry", "construct or verify a geometry");
    std::uint32_t geo_m = 19;
    std::string geo_file, geo_save, geo_codebook_csv, geo_format = "text";
    cmd_geometry->add_option("--m", geo_m, "antenna count (prime)")->capture_default_str();
    cmd_geometry->add_option("--geometry-file", geo_file, "load instead of constructing");
    cmd_geometry->add_option("--save", geo_save, "write the geometry file");
    cmd_geometry->add_option("--export-codebook", geo_codebook_csv,
                             "write the codebook as debug CSV");
    cmd_geometry->add_option("--format", geo_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    // ---- distance ----------------------------------------------------------
    auto* cmd_distance = app.add_subcommand("distance", "minimum subspace distance report");
    std::uint32_t dist_m = 19;
    std::string dist_file, dist_out;
    bool dist_pairwise = false;
    cmd_distance->add_option("--m", dist_m, "antenna count (prime)")->capture_default_str();
    cmd_distance->add_option("--geometry-file", dist_file, "load instead of constructing");
    cmd_distance->add_option("--out", dist_out, "write JSON here instead of stdout");
    cmd_distance->add_flag("--pairwise-check", dist_pairwise,
                           "also run the O(N^2) pairwise scan and report it");

    // ---- sweep -------------------------------------------------------------
    auto* cmd_sweep = app.add_subcommand("sweep", "Monte Carlo error-rate sweep");
    std::uint32_t sweep_m = 19;
    std::string sweep_file;
    std::string sweep_decoders = "map,window:z=2,window:z=3,window:z=5,geometric,modgeo:k=9,grmap:k=9";
    std::string sweep_snr = "-5:1:15";
    std::uint32_t sweep_trials = 10000;
    std::uint64_t sweep_seed = 42;
    std::uint32_t sweep_threads = default_threads();
    std::string sweep_out, sweep_json, sweep_mode = "auto";
    bool sweep_no_timestamp = false, sweep_no_timing = false;
    cmd_sweep->add_option("--m", sweep_m, "antenna count (prime)")->capture_default_str();
    cmd_sweep->add_option("--geometry-file", sweep_file, "load instead of constructing");
    cmd_sweep->add_option("--decoders", sweep_decoders, "comma list of name[:key=val...]")
        ->capture_default_str();
    cmd_sweep->add_option("--snr-db", sweep_snr, "lo:step:hi or comma list (dB)")
        ->capture_default_str();
    cmd_sweep->add_option("--trials", sweep_trials, "trials per SNR point")
        ->capture_default_str();
    cmd_sweep->add_option("--seed", sweep_seed, "RNG seed")->capture_default_str();
    cmd_sweep->add_option("--threads", sweep_threads, "worker threads (0 = auto)");
    cmd_sweep->add_option("--out", sweep_out, "CSV output path");
    cmd_sweep->add_option("--json", sweep_json, "JSON mirror output path");
    cmd_sweep->add_option("--source-mode", sweep_mode,
                          "auto (per decoder family), fixed, or random")
        ->check(CLI::IsMember({"auto", "fixed", "random"}));
    cmd_sweep->add_flag("--no-timestamp", sweep_no_timestamp, "omit the timestamped header");
    cmd_sweep->add_flag("--no-timing", sweep_no_timing,
                        "skip wall-clock timing; mean_decode_ns reads 0");

    // ---- scaling -----------------------------------------------------------
    auto* cmd_scaling = app.add_subcommand("scaling", "decode-time scaling across m");
    std::string scaling_m_list = "7,13,19,31,43";
    std::string scaling_decoders = "map,geometric,modgeo:k=9";
    std::uint32_t scaling_trials = 2000;
    double scaling_snr = 10.0;
    std::uint64_t scaling_seed = 42;
    std::string scaling_out;
    cmd_scaling->add_option("--m-list", scaling_m_list, "comma list of primes")
        ->capture_default_str();
    cmd_scaling->add_option("--decoders", scaling_decoders, "comma list of decoder specs")
        ->capture_default_str();
    cmd_scaling->add_option("--trials", scaling_trials, "decodes per (decoder, m)")
        ->capture_default_str();
    cmd_scaling->add_option("--snr-db", scaling_snr, "operating SNR")->capture_default_str();
    cmd_scaling->add_option("--seed", scaling_seed, "RNG seed")->capture_default_str();
    cmd_scaling->add_option("--out", scaling_out, "CSV output path");

    // ---- decode-debug ------------------------------------------------------
    auto* cmd_debug = app.add_subcommand("decode-debug", "decode one signal, dump diagnostics");
    std::uint32_t dbg_m = 19;
    std::string dbg_file, dbg_decoder = "map", dbg_mode = "auto";
    double dbg_snr = 5.0;
    std::uint32_t dbg_true = 1;
    std::uint64_t dbg_seed = 42, dbg_substream = 0;
    cmd_debug->add_option("--m", dbg_m, "antenna count (prime)")->capture_default_str();
    cmd_debug->add_option("--geometry-file", dbg_file, "load instead of constructing");
    cmd_debug->add_option("--decoder", dbg_decoder, "decoder spec")->capture_default_str();
    cmd_debug->add_option("--snr-db", dbg_snr, "SNR in dB")->capture_default_str();
    cmd_debug->add_option("--true-index", dbg_true, "grid index to transmit")
        ->capture_default_str();
    cmd_debug->add_option("--seed", dbg_seed, "RNG seed")->capture_default_str();
    cmd_debug->add_option("--substream", dbg_substream, "RNG substream");
    cmd_debug->add_option("--source-mode", dbg_mode, "auto, fixed, or random")
        ->check(CLI::IsMember({"auto", "fixed", "random"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems are invalid input
    }

    if (cmd_geometry->parsed()) {
        const ssc::ArrayGeometry geom = resolve_geometry(geo_m, geo_file);
        if (geo_format == "json") {
            nlohmann::json j{{"m", geom.m},
                             {"modulus", geom.modulus},
                             {"positions", geom.positions},
                             {"sidon", ssc::verify_sidon(geom)}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "M = " << geom.m << ", N = " << geom.modulus << '\n';
            std::cout << "positions:";
            for (const auto d : geom.positions) std::cout << ' ' << d;
            std::cout << '\n';
            std::cout << "sidon check: " << (ssc::verify_sidon(geom) ? "PASS" : "FAIL")
                      << '\n';
        }
        if (!geo_save.empty()) {
            auto out = open_output(resolve_out_path(geo_save));
            ssc::save_geometry(geom, out);
        }
        if (!geo_codebook_csv.empty()) {
            auto out = open_output(resolve_out_path(geo_codebook_csv));
            ssc::Codebook::build(geom).export_csv(out);
        }
        return 0;
    }

    if (cmd_distance->parsed()) {
        const ssc::ArrayGeometry geom = resolve_geometry(dist_m, dist_file);
        const ssc::Codebook book = ssc::Codebook::build(geom);
        const ssc::DistanceReport report = ssc::min_distance(book);
        nlohmann::json j{{"m", geom.m},
                         {"n", book.size()},
                         {"d_min", report.d_min},
                         {"lower_bound", report.lower_bound},
                         {"upper_bound", report.upper_bound},
                         {"argmin_pair", {report.first, report.second}}};
        if (dist_pairwise) {
            ssc::GridIndex a = 0, b = 0;
            const double pairwise = ssc::min_distance_pairwise(book, &a, &b);
            j["pairwise_d_min"] = pairwise;
            j["pairwise_argmin_pair"] = {a, b};
        }
        if (dist_out.empty()) {
            std::cout << j.dump(2) << '\n';
        } else {
            auto out = open_output(resolve_out_path(dist_out));
            out << j.dump(2) << '\n';
        }
        return 0;
    }

    if (cmd_sweep->parsed()) {
        ssc::SweepPlan plan;
        plan.m = sweep_m;
        if (!sweep_file.empty()) plan.geometry = ssc::load_geometry_file(sweep_file);
        plan.snr_db = parse_snr_grid(sweep_snr);
        plan.trials = sweep_trials;
        plan.decoders = parse_decoder_list(sweep_decoders);
        plan.seed = sweep_seed;
        plan.threads = sweep_threads;
        plan.measure_time = !sweep_no_timing;
        if (const auto mode = parse_source_mode(sweep_mode)) {
            for (auto& spec : plan.decoders) spec.source_mode = mode;
        }

        const ssc::SweepResult result = ssc::run_sweep(plan);
        if (sweep_out.empty()) {
            ssc::write_sweep_csv(result, std::cout, !sweep_no_timestamp);
        } else {
            auto out = open_output(resolve_out_path(sweep_out));
            ssc::write_sweep_csv(result, out, !sweep_no_timestamp);
        }
        if (!sweep_json.empty()) {
            auto out = open_output(resolve_out_path(sweep_json));
            ssc::write_sweep_json(result, out);
        }
        return 0;
    }

    if (cmd_scaling->parsed()) {
        std::vector<std::uint32_t> m_points;
        std::stringstream ss(scaling_m_list);
        std::string token;
        while (std::getline(ss, token, ',')) {
            if (!token.empty()) m_points.push_back(std::uint32_t(std::stoul(token)));
        }
        const auto report = ssc::runtime_scaling(parse_decoder_list(scaling_decoders),
                                                 m_points, scaling_trials, scaling_snr,
                                                 scaling_seed);
        ssc::write_scaling_text(report, std::cout);
        if (!scaling_out.empty()) {
            auto out = open_output(resolve_out_path(scaling_out));
            ssc::write_scaling_csv(report, out);
        }
        return 0;
    }

    if (cmd_debug->parsed()) {
        const ssc::ArrayGeometry geom = resolve_geometry(dbg_m, dbg_file);
        const ssc::Codebook book = ssc::Codebook::build(geom);
        const ssc::DecoderSpec spec = ssc::parse_decoder_spec(dbg_decoder);

        ssc::SourceMode mode = ssc::SourceMode::fixed_unit;
        if (const auto parsed = parse_source_mode(dbg_mode)) {
            mode = *parsed;
        } else if (spec.kind == ssc::DecoderKind::map ||
                   spec.kind == ssc::DecoderKind::window) {
            mode = ssc::SourceMode::random_phase;
        }

        const ssc::ReceivedSignal sig =
            ssc::transmit(geom, dbg_true, {dbg_snr, mode, dbg_seed, dbg_substream});

        ssc::DecodeTrace trace;
        ssc::DecodeOutcome outcome;
        std::vector<std::uint32_t> subset;
        if (spec.subset > 0) subset = ssc::low_gcd_antennas(geom, spec.subset);
        switch (spec.kind) {
            case ssc::DecoderKind::map:
                outcome = ssc::MapDecoder(book).decode(sig.y, &trace);
                break;
            case ssc::DecoderKind::window:
                outcome = ssc::WindowDecoder(book, spec.z).decode(sig.y, &trace);
                break;
            case ssc::DecoderKind::geometric:
                outcome = ssc::GeometricDecoder(geom, subset).decode(sig.y, &trace);
                break;
            case ssc::DecoderKind::modified_geometric:
                outcome = ssc::ModifiedGeometricDecoder(geom, spec.k, subset)
                              .decode(sig.y, &trace);
                break;
            case ssc::DecoderKind::geo_reduced_map: {
                const std::uint32_t g = spec.g == 0 ? book.size() / 2 : spec.g;
                outcome = ssc::GeoReducedMapDecoder(geom, book, spec.k, g, subset)
                              .decode(sig.y, &trace);
                break;
            }
        }

        nlohmann::json j;
        j["decoder"] = ssc::decoder_label(spec);
        j["true_index"] = sig.true_index;
        j["snr_db"] = dbg_snr;
        j["source_mode"] = mode == ssc::SourceMode::fixed_unit ? "fixed-unit" : "random-phase";
        j["estimated_index"] = outcome.estimated_index;
        j["correct"] = outcome.estimated_index == sig.true_index;
        j["candidates_examined"] = outcome.candidates_examined;
        if (outcome.window_index > 0) j["window_index"] = outcome.window_index;
        if (outcome.total_votes > 0) {
            j["total_votes"] = outcome.total_votes;
            j["distinct_voted"] = outcome.distinct_voted;
        }
        if (!trace.shortlist.empty()) j["shortlist"] = trace.shortlist;
        j["kernel_backend"] = ssc::kernels::backend_name(ssc::kernels::active_backend());
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
