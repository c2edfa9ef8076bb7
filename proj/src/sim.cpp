#include "ssc/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <variant>

#include <json.hpp>

namespace ssc {

namespace {

constexpr double kWilsonZ = 1.959963984540054;  // 97.5% normal quantile

const char* kind_name(DecoderKind kind) {
    switch (kind) {
        case DecoderKind::map: return "map";
        case DecoderKind::window: return "window";
        case DecoderKind::geometric: return "geometric";
        case DecoderKind::modified_geometric: return "modgeo";
        case DecoderKind::geo_reduced_map: return "grmap";
    }
    return "?";
}

const char* mode_name(SourceMode mode) {
    return mode == SourceMode::fixed_unit ? "fixed-unit" : "random-phase";
}

SourceMode default_mode(DecoderKind kind) {
    // MAP and window correlate moduli and are phase invariant; the
    // geometric family quantizes absolute phases and needs x = 1.
    switch (kind) {
        case DecoderKind::map:
        case DecoderKind::window:
            return SourceMode::random_phase;
        default:
            return SourceMode::fixed_unit;
    }
}

bool uses_k(DecoderKind kind) {
    return kind == DecoderKind::modified_geometric || kind == DecoderKind::geo_reduced_map;
}

using AnyDecoder = std::variant<MapDecoder, WindowDecoder, GeometricDecoder,
                                ModifiedGeometricDecoder, GeoReducedMapDecoder>;

struct BuiltDecoder {
    DecoderSpec spec;  // g and subset resolved
    SourceMode mode = SourceMode::fixed_unit;
    AnyDecoder decoder;
};

BuiltDecoder build_decoder(const DecoderSpec& spec, const ArrayGeometry& geom,
                           const Codebook& book) {
    BuiltDecoder built{spec, spec.source_mode.value_or(default_mode(spec.kind)),
                       AnyDecoder{MapDecoder(book)}};
    std::vector<std::uint32_t> subset;
    if (spec.subset > 0) subset = low_gcd_antennas(geom, spec.subset);
    switch (spec.kind) {
        case DecoderKind::map:
            built.decoder = MapDecoder(book);
            break;
        case DecoderKind::window:
            built.decoder = WindowDecoder(book, spec.z);
            break;
        case DecoderKind::geometric:
            built.decoder = GeometricDecoder(geom, std::move(subset));
            break;
        case DecoderKind::modified_geometric:
            built.decoder = ModifiedGeometricDecoder(geom, spec.k, std::move(subset));
            break;
        case DecoderKind::geo_reduced_map: {
            const std::uint32_t g = spec.g == 0 ? book.size() / 2 : spec.g;
            built.spec.g = g;
            built.decoder = GeoReducedMapDecoder(geom, book, spec.k, g, std::move(subset));
            break;
        }
    }
    return built;
}

DecodeOutcome run_decoder(const AnyDecoder& decoder, std::span<const cplx> y) {
    return std::visit([&](const auto& d) { return d.decode(y); }, decoder);
}

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

std::string decoder_label(const DecoderSpec& spec) { return kind_name(spec.kind); }

DecoderSpec parse_decoder_spec(std::string_view text) {
    DecoderSpec spec;
    const auto name_end = text.find(':');
    const std::string_view name = text.substr(0, name_end);
    if (name == "map") {
        spec.kind = DecoderKind::map;
    } else if (name == "window") {
        spec.kind = DecoderKind::window;
    } else if (name == "geometric") {
        spec.kind = DecoderKind::geometric;
    } else if (name == "modgeo") {
        spec.kind = DecoderKind::modified_geometric;
    } else if (name == "grmap") {
        spec.kind = DecoderKind::geo_reduced_map;
    } else {
        throw std::invalid_argument("unknown decoder \"" + std::string(name) + "\"");
    }

    std::string_view rest = name_end == std::string_view::npos ? "" : text.substr(name_end + 1);
    while (!rest.empty()) {
        const auto next = rest.find(':');
        const std::string_view part = rest.substr(0, next);
        rest = next == std::string_view::npos ? "" : rest.substr(next + 1);
        const auto eq = part.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("decoder option \"" + std::string(part) +
                                        "\" is not key=value");
        }
        const std::string_view key = part.substr(0, eq);
        const std::string value(part.substr(eq + 1));
        std::uint32_t parsed = 0;
        try {
            parsed = std::uint32_t(std::stoul(value));
        } catch (const std::exception&) {
            throw std::invalid_argument("decoder option " + std::string(key) +
                                        ": bad value \"" + value + "\"");
        }
        if (key == "z" && spec.kind == DecoderKind::window) {
            spec.z = parsed;
        } else if (key == "k" && uses_k(spec.kind)) {
            spec.k = parsed;
        } else if (key == "g" && spec.kind == DecoderKind::geo_reduced_map) {
            spec.g = parsed;
        } else if (key == "subset" && spec.kind != DecoderKind::map &&
                   spec.kind != DecoderKind::window) {
            spec.subset = parsed;
        } else {
            throw std::invalid_argument("decoder option \"" + std::string(key) +
                                        "\" not valid for " + kind_name(spec.kind));
        }
    }
    return spec;
}

std::pair<double, double> wilson_ci95(std::uint64_t errors, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double t = double(trials);
    const double p = double(errors) / t;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / t;
    const double center = (p + z2 / (2.0 * t)) / denom;
    const double half =
        kWilsonZ * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
    // The endpoints are exact at the boundary counts; don't let rounding
    // leak a 1e-18 residue into lo when there were no errors.
    const double lo = errors == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = errors == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

SweepResult run_sweep(const SweepPlan& plan) {
    if (plan.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (plan.decoders.empty()) throw std::invalid_argument("no decoders selected");
    if (plan.snr_db.empty()) throw std::invalid_argument("no SNR points");
    for (const double s : plan.snr_db) {
        if (std::isnan(s) || (std::isinf(s) && s < 0)) {
            throw std::invalid_argument("SNR points must be finite or +inf");
        }
    }

    SweepResult result;
    result.plan = plan;
    ArrayGeometry geom = plan.geometry ? *plan.geometry : bose_chowla_set(plan.m);
    validate_geometry(geom);
    result.plan.m = geom.m;
    result.plan.geometry = geom;

    const Codebook book = Codebook::build(geom);
    const std::uint32_t n_points = book.size();

    std::vector<BuiltDecoder> decoders;
    decoders.reserve(plan.decoders.size());
    for (const auto& spec : plan.decoders) {
        decoders.push_back(build_decoder(spec, geom, book));
        result.plan.decoders[decoders.size() - 1] = decoders.back().spec;
        result.mode_used.push_back(decoders.back().mode);
    }
    bool need_fixed = false, need_random = false;
    for (const auto& d : decoders) {
        (d.mode == SourceMode::fixed_unit ? need_fixed : need_random) = true;
    }

    std::uint32_t threads = plan.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<std::uint32_t>(threads, plan.trials);

    struct Accum {
        std::uint64_t errors = 0;
        std::uint64_t candidates = 0;
        std::uint64_t time_ns = 0;
    };

    result.cells.assign(decoders.size(), std::vector<SweepCell>(plan.snr_db.size()));

    for (std::size_t si = 0; si < plan.snr_db.size(); ++si) {
        const double snr = plan.snr_db[si];
        std::vector<std::vector<Accum>> per_thread(threads,
                                                   std::vector<Accum>(decoders.size()));
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto worker = [&](std::uint32_t tid, std::uint64_t begin, std::uint64_t end) {
            try {
                auto& acc = per_thread[tid];
                for (std::uint64_t trial = begin; trial < end; ++trial) {
                    const std::uint64_t sub = mix_substream(si, trial);
                    Rng index_rng(plan.seed, mix_substream(sub, 0));
                    const GridIndex true_index = GridIndex(index_rng.below(n_points)) + 1;

                    ReceivedSignal sig_fixed, sig_random;
                    if (need_fixed) {
                        sig_fixed = transmit(geom, true_index,
                                             {snr, SourceMode::fixed_unit, plan.seed,
                                              mix_substream(sub, 1)});
                    }
                    if (need_random) {
                        sig_random = transmit(geom, true_index,
                                              {snr, SourceMode::random_phase, plan.seed,
                                               mix_substream(sub, 1)});
                    }

                    for (std::size_t di = 0; di < decoders.size(); ++di) {
                        const auto& y = decoders[di].mode == SourceMode::fixed_unit
                                            ? sig_fixed.y
                                            : sig_random.y;
                        DecodeOutcome outcome;
                        if (plan.measure_time) {
                            const auto t0 = std::chrono::steady_clock::now();
                            outcome = run_decoder(decoders[di].decoder, y);
                            const auto t1 = std::chrono::steady_clock::now();
                            acc[di].time_ns +=
                                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                                    .count();
                        } else {
                            outcome = run_decoder(decoders[di].decoder, y);
                        }
                        if (outcome.estimated_index != true_index) ++acc[di].errors;
                        acc[di].candidates += outcome.candidates_examined;
                    }
                }
            } catch (...) {
                const std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        };

        if (threads == 1) {
            worker(0, 0, plan.trials);
        } else {
            std::vector<std::thread> pool;
            const std::uint64_t chunk = (plan.trials + threads - 1) / threads;
            for (std::uint32_t tid = 0; tid < threads; ++tid) {
                const std::uint64_t begin = std::uint64_t(tid) * chunk;
                const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, plan.trials);
                if (begin >= end) break;
                pool.emplace_back(worker, tid, begin, end);
            }
            for (auto& th : pool) th.join();
        }
        if (failure) std::rethrow_exception(failure);

        for (std::size_t di = 0; di < decoders.size(); ++di) {
            Accum merged;
            for (const auto& acc : per_thread) {
                merged.errors += acc[di].errors;
                merged.candidates += acc[di].candidates;
                merged.time_ns += acc[di].time_ns;
            }
            SweepCell& cell = result.cells[di][si];
            cell.errors = merged.errors;
            cell.trials = plan.trials;
            cell.p_err = double(merged.errors) / double(plan.trials);
            std::tie(cell.ci_lo, cell.ci_hi) = wilson_ci95(merged.errors, plan.trials);
            cell.mean_decode_ns =
                plan.measure_time ? double(merged.time_ns) / double(plan.trials) : 0.0;
            cell.mean_candidates = double(merged.candidates) / double(plan.trials);
        }
    }
    return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out, bool with_timestamp) {
    if (with_timestamp) {
        const std::time_t now = std::time(nullptr);
        char stamp[64];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        out << "# generated " << stamp << '\n';
    }
    out << "decoder,z,k,g,snr_db,trials,errors,p_err,ci_lo,ci_hi,mean_decode_ns,"
           "mean_candidates\n";
    for (std::size_t di = 0; di < result.cells.size(); ++di) {
        const DecoderSpec& spec = result.plan.decoders[di];
        for (std::size_t si = 0; si < result.plan.snr_db.size(); ++si) {
            const SweepCell& cell = result.cells[di][si];
            out << decoder_label(spec) << ',';
            if (spec.kind == DecoderKind::window) out << spec.z;
            out << ',';
            if (uses_k(spec.kind)) out << spec.k;
            out << ',';
            if (spec.kind == DecoderKind::geo_reduced_map) out << spec.g;
            out << ',' << format_double(result.plan.snr_db[si]) << ',' << cell.trials << ','
                << cell.errors << ',' << format_double(cell.p_err) << ','
                << format_double(cell.ci_lo) << ',' << format_double(cell.ci_hi) << ','
                << format_double(cell.mean_decode_ns) << ','
                << format_double(cell.mean_candidates) << '\n';
        }
    }
}

namespace {

nlohmann::json spec_to_json(const DecoderSpec& spec) {
    nlohmann::json j;
    j["kind"] = kind_name(spec.kind);
    if (spec.kind == DecoderKind::window) j["z"] = spec.z;
    if (uses_k(spec.kind)) j["k"] = spec.k;
    if (spec.kind == DecoderKind::geo_reduced_map) j["g"] = spec.g;
    if (spec.subset > 0) j["subset"] = spec.subset;
    if (spec.source_mode) j["source_mode"] = mode_name(*spec.source_mode);
    return j;
}

}  // namespace

void write_sweep_json(const SweepResult& result, std::ostream& out) {
    nlohmann::json j;
    nlohmann::json plan;
    plan["m"] = result.plan.m;
    plan["seed"] = result.plan.seed;
    plan["trials"] = result.plan.trials;
    plan["threads"] = result.plan.threads;
    plan["measure_time"] = result.plan.measure_time;
    plan["snr_db"] = result.plan.snr_db;
    if (result.plan.geometry) {
        plan["geometry"] = {{"m", result.plan.geometry->m},
                            {"modulus", result.plan.geometry->modulus},
                            {"positions", result.plan.geometry->positions}};
    }
    plan["decoders"] = nlohmann::json::array();
    for (const auto& spec : result.plan.decoders) plan["decoders"].push_back(spec_to_json(spec));
    j["plan"] = plan;

    j["results"] = nlohmann::json::array();
    for (std::size_t di = 0; di < result.cells.size(); ++di) {
        nlohmann::json entry = spec_to_json(result.plan.decoders[di]);
        entry["source_mode"] = mode_name(result.mode_used[di]);
        entry["cells"] = nlohmann::json::array();
        for (std::size_t si = 0; si < result.plan.snr_db.size(); ++si) {
            const SweepCell& cell = result.cells[di][si];
            entry["cells"].push_back({{"snr_db", result.plan.snr_db[si]},
                                      {"trials", cell.trials},
                                      {"errors", cell.errors},
                                      {"p_err", cell.p_err},
                                      {"ci_lo", cell.ci_lo},
                                      {"ci_hi", cell.ci_hi},
                                      {"mean_decode_ns", cell.mean_decode_ns},
                                      {"mean_candidates", cell.mean_candidates}});
        }
        j["results"].push_back(entry);
    }
    out << j.dump(2) << '\n';
}

ScalingReport runtime_scaling(const std::vector<DecoderSpec>& decoders,
                              const std::vector<std::uint32_t>& m_points, std::uint32_t trials,
                              double snr_db, std::uint64_t seed) {
    if (m_points.size() < 3) throw std::invalid_argument("scaling needs >= 3 antenna counts");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");

    ScalingReport report;
    report.trials = trials;
    report.snr_db = snr_db;
    report.series.resize(decoders.size());
    for (std::size_t di = 0; di < decoders.size(); ++di) report.series[di].spec = decoders[di];

    using clock = std::chrono::steady_clock;

    for (const std::uint32_t m : m_points) {
        const ArrayGeometry geom = bose_chowla_set(m);
        const auto b0 = clock::now();
        const Codebook book = Codebook::build(geom);
        const auto b1 = clock::now();
        report.codebook_build.push_back(
            {m, double(std::chrono::duration_cast<std::chrono::nanoseconds>(b1 - b0).count())});

        // Fixed-unit sources: the geometric family quantizes absolute phase,
        // and the source mode does not affect decode cost.
        std::vector<ReceivedSignal> pool;
        const std::uint32_t pool_size = std::min<std::uint32_t>(trials, 256);
        pool.reserve(pool_size);
        for (std::uint32_t t = 0; t < pool_size; ++t) {
            const std::uint64_t sub = mix_substream(m, t);
            Rng index_rng(seed, mix_substream(sub, 0));
            const GridIndex n = GridIndex(index_rng.below(book.size())) + 1;
            pool.push_back(transmit(
                geom, n, {snr_db, SourceMode::fixed_unit, seed, mix_substream(sub, 1)}));
        }

        for (std::size_t di = 0; di < decoders.size(); ++di) {
            const BuiltDecoder built = build_decoder(decoders[di], geom, book);

            // Warm-up, also an estimate for the batch size that keeps each
            // timed interval well above clock resolution.
            volatile std::uint64_t sink = 0;
            const std::uint32_t warm = std::min<std::uint32_t>(pool_size, 64);
            const auto w0 = clock::now();
            for (std::uint32_t t = 0; t < warm; ++t) {
                sink = sink + run_decoder(built.decoder, pool[t].y).estimated_index;
            }
            const auto w1 = clock::now();
            const double est_ns = std::max(
                1.0, double(std::chrono::duration_cast<std::chrono::nanoseconds>(w1 - w0)
                                .count()) /
                         warm);
            const std::uint64_t batch =
                std::clamp<std::uint64_t>(std::uint64_t(50000.0 / est_ns) + 1, 1, trials);

            std::vector<double> batch_means;
            std::uint64_t done = 0;
            std::uint32_t cursor = 0;
            while (done < trials) {
                const std::uint64_t todo = std::min<std::uint64_t>(batch, trials - done);
                const auto t0 = clock::now();
                for (std::uint64_t i = 0; i < todo; ++i) {
                    sink = sink + run_decoder(built.decoder, pool[cursor].y).estimated_index;
                    if (++cursor == pool_size) cursor = 0;
                }
                const auto t1 = clock::now();
                batch_means.push_back(
                    double(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                               .count()) /
                    double(todo));
                done += todo;
            }
            std::sort(batch_means.begin(), batch_means.end());
            const double median = batch_means[batch_means.size() / 2];
            report.series[di].points.push_back({m, median});
        }
    }

    // Least-squares slope of log(time) against log(m).
    for (auto& series : report.series) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double count = double(series.points.size());
        for (const auto& p : series.points) {
            const double x = std::log(double(p.m));
            const double y = std::log(p.median_decode_ns);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        series.log_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    }
    return report;
}

void write_scaling_text(const ScalingReport& report, std::ostream& out) {
    out << "runtime scaling (" << report.trials << " decodes per point, "
        << format_double(report.snr_db) << " dB)\n";
    out << "  codebook build (one-off):";
    for (const auto& p : report.codebook_build) {
        out << "  m=" << p.m << " " << format_double(p.median_decode_ns / 1000.0) << "us";
    }
    out << '\n';
    for (const auto& series : report.series) {
        out << "  " << decoder_label(series.spec);
        if (series.spec.kind == DecoderKind::window) out << " z=" << series.spec.z;
        if (uses_k(series.spec.kind)) out << " k=" << series.spec.k;
        if (series.spec.kind == DecoderKind::geo_reduced_map) out << " g=" << series.spec.g;
        if (series.spec.subset > 0) out << " subset=" << series.spec.subset;
        out << ": slope " << format_double(series.log_slope) << '\n';
        for (const auto& p : series.points) {
            out << "    m=" << p.m << "  median " << format_double(p.median_decode_ns)
                << " ns\n";
        }
    }
}

void write_scaling_csv(const ScalingReport& report, std::ostream& out) {
    out << "decoder,z,k,g,subset,m,median_decode_ns,log_slope\n";
    for (const auto& series : report.series) {
        for (const auto& p : series.points) {
            out << decoder_label(series.spec) << ',';
            if (series.spec.kind == DecoderKind::window) out << series.spec.z;
            out << ',';
            if (uses_k(series.spec.kind)) out << series.spec.k;
            out << ',';
            if (series.spec.kind == DecoderKind::geo_reduced_map) out << series.spec.g;
            out << ',';
            if (series.spec.subset > 0) out << series.spec.subset;
            out << ',' << p.m << ',' << format_double(p.median_decode_ns) << ','
                << format_double(series.log_slope) << '\n';
        }
    }
}

}  // namespace ssc
