#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>

#include "counting.hpp"
#include "excursion.hpp"
#include "lemma_checks.hpp"

namespace raag {

inline constexpr const char* kToolVersion = "1.0.0";

// nlohmann's default object keeps keys sorted, which the artifact
// determinism contract relies on
using Json = nlohmann::json;

// --- files --------------------------------------------------------------------

// Binary mode everywhere: artifacts are LF / UTF-8 on every platform.
inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw input_error("cannot open for writing: " + path.string());
    os << content;
    if (!os) throw input_error("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw input_error("cannot open: " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

inline GroupModel load_group_file(const std::filesystem::path& path) {
    return parse_group_text(read_text_file(path));
}

inline std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

inline std::string format_fraction(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

}  // namespace detail

// --- CSV artifacts --------------------------------------------------------------

inline std::string growth_csv(const GrowthEstimate& est) {
    std::string out = "n,sphere_size,ball_size\n";
    for (size_t n = 0; n < est.sphere_sizes.size(); ++n)
        out += std::to_string(n) + "," + est.sphere_sizes[n].str() + "," +
               est.ball_sizes[n].str() + "\n";
    return out;
}

inline std::string genericity_csv(const std::vector<GenericityRow>& rows) {
    std::string out = "n,ball_size,sampled,contracting,fraction,D,R,m,seed\n";
    for (const GenericityRow& r : rows) {
        out += std::to_string(r.n) + "," + r.ball_size.str() + "," + std::to_string(r.sampled) +
               "," + std::to_string(r.contracting) + "," + detail::format_fraction(r.fraction()) +
               "," + std::to_string(r.D) + "," + std::to_string(r.R) + "," + std::to_string(r.m) +
               "," + (r.exhaustive ? std::string("-") : std::to_string(r.seed)) + "\n";
    }
    return out;
}

// One line per excursion sample; g_normal_form is blank in aggregate runs
// where only the per-n distribution is retained.
inline std::string excursion_csv_header() {
    return "n,sample_index,g_normal_form,K,excursion,truncated\n";
}

inline std::string excursion_csv_row(int n, int sample_index, const std::string& g_normal_form,
                                     int K, int excursion, bool truncated) {
    return std::to_string(n) + "," + std::to_string(sample_index) + "," + g_normal_form + "," +
           std::to_string(K) + "," + std::to_string(excursion) + "," +
           (truncated ? "1" : "0") + "\n";
}

inline std::string loglaw_csv(const LoglawResult& res) {
    std::string out = excursion_csv_header();
    for (const LoglawRow& row : res.rows)
        for (size_t i = 0; i < row.sample_excursions.size(); ++i)
            out += excursion_csv_row(row.n, (int)i, row.sample_words[i], res.K,
                                     row.sample_excursions[i], row.sample_truncated[i]);
    return out;
}

// --- JSON artifacts --------------------------------------------------------------

inline Json witness_json(const ContractionWitness& w) {
    return Json{{"geodesic_from", to_string(w.kappa.front())},
                {"geodesic_to", to_string(w.kappa.back())},
                {"geodesic_index", w.geodesic_index},
                {"dist_to_segment", w.dist_to_segment},
                {"proj_diameter", w.proj_diameter}};
}

inline Json contraction_report_json(const ContractionReport& rep) {
    Json witnesses = Json::array();
    for (const auto& [D, w] : rep.failures) {
        Json jw = witness_json(w);
        jw["D"] = D;
        witnesses.push_back(jw);
    }
    return Json{{"segment_endpoints",
                 {to_string(rep.segment.front()), to_string(rep.segment.back())}},
                {"D_grid", rep.D_grid},
                {"R", rep.R},
                {"caps", {{"geodesic_cap", rep.geodesic_cap}, {"caps_hit", rep.caps_hit}}},
                {"D_star", rep.D_star ? Json(*rep.D_star) : Json(nullptr)},
                {"witnesses", witnesses},
                {"elapsed_ms", rep.elapsed_ms}};
}

inline Json genericity_json(const std::vector<GenericityRow>& rows) {
    Json out = Json::array();
    for (const GenericityRow& r : rows)
        out.push_back(Json{{"n", r.n},
                           {"ball_size", r.ball_size.str()},
                           {"sampled", r.sampled},
                           {"contracting", r.contracting},
                           {"fraction", r.fraction()},
                           {"D", r.D},
                           {"R", r.R},
                           {"m", r.m},
                           {"geodesic_cap", r.geodesic_cap},
                           {"exhaustive", r.exhaustive},
                           {"seed", r.seed}});
    return Json{{"rows", out}};
}

inline Json loglaw_json(const LoglawResult& res) {
    Json rows = Json::array();
    for (const LoglawRow& row : res.rows)
        rows.push_back(Json{{"n", row.n},
                            {"min", row.min},
                            {"q1", row.q1},
                            {"median", row.median},
                            {"q3", row.q3},
                            {"max", row.max},
                            {"any_truncated", row.any_truncated},
                            {"covered_fraction", row.covered_fraction}});
    return Json{{"rows", rows},       {"C1", res.C1},   {"C2", res.C2},
                {"samples", res.samples}, {"K", res.K}, {"geodesic_cap", res.cap},
                {"seed", res.seed}};
}

inline Json lemma_report_json(const LemmaCheckReport& rep) {
    return Json{{"check", rep.check},
                {"trials", rep.trials},
                {"violations", rep.violations},
                {"observed", rep.observed},
                {"bound", rep.bound},
                {"note", rep.note}};
}

// --- run manifest --------------------------------------------------------------

struct RunManifest {
    std::string config_digest;
    std::string group_digest;
    std::string tool_version = kToolVersion;
    std::string started_utc;
    std::string finished_utc;
    std::map<std::string, std::string> output_digests;  // artifact filename -> digest
    std::string status = "ok";                          // "ok" or "resource-limit"
    std::string note;
};

inline std::string utc_timestamp() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline Json manifest_json(const RunManifest& m) {
    return Json{{"config_digest", m.config_digest},
                {"group_digest", m.group_digest},
                {"tool_version", m.tool_version},
                {"started_utc", m.started_utc},
                {"finished_utc", m.finished_utc},
                {"output_digests", m.output_digests},
                {"status", m.status},
                {"note", m.note}};
}

// Records one artifact: writes it and notes its digest in the manifest.
inline void emit_artifact(RunManifest& m, const std::filesystem::path& dir,
                          const std::string& name, const std::string& content) {
    write_text_file(dir / name, content);
    m.output_digests[name] = digest_hex(content);
}

// --- ball cache --------------------------------------------------------------

// Cache file: two header lines (group digest, radius), then one normal-form
// word per line, grouped by increasing length. Any mismatch or parse failure
// is a miss, never an error.
inline std::string ball_cache_filename(const GroupModel& G, int radius) {
    return "ball-" + G.digest() + "-r" + std::to_string(radius) + ".txt";
}

inline void save_ball_cache(const std::filesystem::path& dir, const GroupModel& G,
                            const BallIndex& ball) {
    std::filesystem::create_directories(dir);
    std::string out = "group: " + G.digest() + "\nradius: " + std::to_string(ball.radius) + "\n";
    for (const auto& sphere : ball.spheres)
        for (const Element& g : sphere) out += to_string(g) + "\n";
    write_text_file(dir / ball_cache_filename(G, ball.radius), out);
}

inline std::optional<BallIndex> load_ball_cache(const std::filesystem::path& dir,
                                                const GroupModel& G, int radius) {
    std::filesystem::path file = dir / ball_cache_filename(G, radius);
    if (!std::filesystem::exists(file)) return std::nullopt;
    std::istringstream is(read_text_file(file));
    std::string tag, value;
    int r = -1;
    if (!(is >> tag >> value) || tag != "group:" || value != G.digest()) return std::nullopt;
    if (!(is >> tag >> r) || tag != "radius:" || r != radius) return std::nullopt;
    is >> std::ws;
    BallIndex ball;
    ball.radius = radius;
    ball.spheres.assign((size_t)radius + 1, {});
    std::string line;
    try {
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            Element g = parse_element(G, line);
            if (g.length() > radius || to_string(g) != line) return std::nullopt;
            ball.spheres[g.length()].push_back(g);
        }
    } catch (const input_error&) {
        return std::nullopt;
    }
    // sanity: sphere sizes must match the automaton counts
    GeodesicAutomaton A = GeodesicAutomaton::build(G);
    std::vector<BigInt> counts = A.sphere_counts(radius);
    for (int k = 0; k <= radius; ++k)
        if (BigInt(ball.spheres[k].size()) != counts[k]) return std::nullopt;
    return ball;
}

inline int evict_group_caches(const std::filesystem::path& dir, const GroupModel& G) {
    if (!std::filesystem::exists(dir)) return 0;
    int removed = 0;
    std::string prefix = "ball-" + G.digest() + "-";
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind(prefix, 0) == 0 && std::filesystem::remove(entry.path())) ++removed;
    }
    return removed;
}

// Load-or-build: a validated cache hit skips enumeration; misses (including
// corrupt files) fall through to a fresh build that refreshes the cache.
inline BallIndex cached_ball(const GeodesicAutomaton& A, int radius,
                             const std::optional<std::filesystem::path>& cache_dir) {
    if (cache_dir)
        if (auto hit = load_ball_cache(*cache_dir, A.model(), radius)) return std::move(*hit);
    BallIndex ball = enumerate_ball(A, radius);
    if (cache_dir) save_ball_cache(*cache_dir, A.model(), ball);
    return ball;
}

}  // namespace raag
