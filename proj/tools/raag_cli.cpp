// Command-line front end: one experiment per invocation, artifacts plus a
// run manifest written to the output directory. All sampled modes require an
// explicit seed so runs are reproducible.
#include <CLI11.hpp>
#include <cstdlib>
#include <raag/io.hpp>

using namespace raag;
namespace fs = std::filesystem;

namespace {

// exit codes: 0 ok, 2 usage or input, 3 resource limit, 4 internal
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitInternal = 4;

std::optional<fs::path> cache_dir_from_env() {
    const char* dir = std::getenv("RAAG_CACHE_DIR");
    if (!dir || !*dir) return std::nullopt;
    return fs::path(dir);
}

struct Run {
    std::string group_path;
    std::string out_dir = ".";
    Json config;  // canonical parameter record; its digest keys the manifest
    std::function<void(const GroupModel&, RunManifest&, const fs::path&)> body;
};

void add_common(CLI::App* cmd, Run& run) {
    cmd->add_option("--group", run.group_path, "group definition file")->required();
    cmd->add_option("--out", run.out_dir, "artifact output directory");
}

int execute(Run& run, const std::string& command) {
    RunManifest manifest;
    manifest.started_utc = utc_timestamp();
    fs::path out(run.out_dir);
    int code = 0;
    try {
        fs::create_directories(out);
        GroupModel G = load_group_file(run.group_path);
        run.config["command"] = command;
        run.config["group_digest"] = G.digest();
        manifest.config_digest = digest_hex(run.config.dump());
        manifest.group_digest = G.digest();
        run.body(G, manifest, out);
    } catch (const resource_error& e) {
        manifest.status = "resource-limit";
        manifest.note = e.what();
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        code = kExitResource;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const input_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    manifest.finished_utc = utc_timestamp();
    try {
        write_text_file(out / "manifest.json", render_json(manifest_json(manifest)));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    return code;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ','))
        try {
            out.push_back(std::stoi(tok));
        } catch (...) {
            throw usage_error(std::string(what) + ": bad integer '" + tok + "'");
        }
    if (out.empty()) throw usage_error(std::string(what) + ": empty list");
    return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contracting-geodesic toolkit for right-angled Artin groups"};
    app.require_subcommand(1);
    std::vector<std::pair<Run*, std::string>> pending;

    // --- group-info -----------------------------------------------------------
    static Run info;
    {
        auto* cmd = app.add_subcommand("group-info", "digest and structure of a group file");
        add_common(cmd, info);
        info.body = [](const GroupModel& G, RunManifest& m, const fs::path& out) {
            Json edges = Json::array();
            for (auto [a, b] : G.graph().edges)
                edges.push_back({G.graph().vertex_names[a], G.graph().vertex_names[b]});
            Json j{{"digest", G.digest()},
                   {"vertices", G.graph().vertex_names},
                   {"edges", edges},
                   {"num_letters", G.num_letters()}};
            emit_artifact(m, out, "group.json", render_json(j));
        };
        cmd->callback([&] { pending.emplace_back(&info, "group-info"); });
    }

    // --- growth -----------------------------------------------------------------
    static Run growth;
    static int growth_max_n = 10;
    {
        auto* cmd = app.add_subcommand("growth", "sphere and ball sizes with a growth estimate");
        add_common(cmd, growth);
        cmd->add_option("--max-n", growth_max_n, "largest radius")->check(CLI::Range(4, 64));
        growth.body = [](const GroupModel& G, RunManifest& m, const fs::path& out) {
            growth.config["max_n"] = growth_max_n;
            GeodesicAutomaton A = GeodesicAutomaton::build(G);
            GrowthEstimate est = growth_rate(A, growth_max_n);
            emit_artifact(m, out, "growth.csv", growth_csv(est));
            emit_artifact(m, out, "growth.json",
                          render_json(Json{{"lambda_hat", est.lambda_hat},
                                           {"polynomial_flag", est.polynomial_flag},
                                           {"max_n", growth_max_n}}));
        };
        cmd->callback([&] { pending.emplace_back(&growth, "growth"); });
    }

    // --- geodesics --------------------------------------------------------------
    static Run geo;
    static std::string geo_from = "e", geo_to;
    static int geo_cap = 100;
    {
        auto* cmd = app.add_subcommand("geodesics", "enumerate geodesics between two elements");
        add_common(cmd, geo);
        cmd->add_option("--from", geo_from, "start element");
        cmd->add_option("--to", geo_to, "end element")->required();
        cmd->add_option("--cap", geo_cap, "enumeration cap")->check(CLI::PositiveNumber);
        geo.body = [](const GroupModel& G, RunManifest& m, const fs::path& out) {
            geo.config["from"] = geo_from;
            geo.config["to"] = geo_to;
            geo.config["cap"] = geo_cap;
            auto en = enumerate_geodesics(G, parse_element(G, geo_from),
                                          parse_element(G, geo_to), geo_cap);
            Json words = Json::array();
            for (const PathSegment& p : en.geodesics) {
                Json pts = Json::array();
                for (const Element& q : p.points) pts.push_back(to_string(q));
                words.push_back(pts);
            }
            emit_artifact(m, out, "geodesics.json",
                          render_json(Json{{"count", en.count},
                                           {"truncated", en.truncated},
                                           {"geodesics", words}}));
        };
        cmd->callback([&] { pending.emplace_back(&geo, "geodesics"); });
    }

    // --- contract-test -----------------------------------------------------------
    static Run ct;
    static std::string ct_from = "e", ct_to, ct_grid = "1,2,4,8";
    static int ct_R = 4, ct_cap = 50;
    {
        auto* cmd = app.add_subcommand("contract-test",
                                       "empirical contraction constant of one segment");
        add_common(cmd, ct);
        cmd->add_option("--from", ct_from, "segment start");
        cmd->add_option("--to", ct_to, "segment end")->required();
        cmd->add_option("--R", ct_R, "far-pair radius")->check(CLI::PositiveNumber);
        cmd->add_option("--grid", ct_grid, "comma-separated D grid");
        cmd->add_option("--cap", ct_cap, "geodesic cap")->check(CLI::PositiveNumber);
        ct.body = [](const GroupModel& G, RunManifest& m, const fs::path& out) {
            ct.config["from"] = ct_from;
            ct.config["to"] = ct_to;
            ct.config["R"] = ct_R;
            ct.config["grid"] = ct_grid;
            ct.config["cap"] = ct_cap;
            PathSegment gamma = canonical_geodesic(G, parse_element(G, ct_from),
                                                   parse_element(G, ct_to));
            ContractionReport rep = empirical_contraction_constant(
                G, gamma, ct_R, parse_int_list(ct_grid, "grid"), ct_cap);
            emit_artifact(m, out, "contraction.json", render_json(contraction_report_json(rep)));
        };
        cmd->callback([&] { pending.emplace_back(&ct, "contract-test"); });
    }

    // --- classify ------------------------------------------------------------------
    static Run cl;
    static std::string cl_element, cl_grid = "1,2,4,8";
    static int cl_D = 2, cl_R = 4, cl_cap = 50, cl_m = 2;
    {
        auto* cmd = app.add_subcommand("classify", "contracting / non-contracting / elliptic");
        add_common(cmd, cl);
        cmd->add_option("--element", cl_element, "element to classify")->required();
        cmd->add_option("--D", cl_D, "contraction threshold")->check(CLI::PositiveNumber);
        cmd->add_option("--R", cl_R, "far-pair radius")->check(CLI::PositiveNumber);
        cmd->add_option("--grid", cl_grid, "comma-separated D grid");
        cmd->add_option("--cap", cl_cap, "geodesic cap")->check(CLI::PositiveNumber);
        cmd->add_option("--m", cl_m, "axis power")->check(CLI::PositiveNumber);
        cl.body = [](const GroupModel& G, RunManifest& m, const fs::path& out) {
            cl.config["element"] = cl_element;
            cl.config["D"] = cl_D;
            cl.config["R"] = cl_R;
            cl.config["grid"] = cl_grid;
            cl.config["cap"] = cl_cap;
            cl.config["m"] = cl_m;
            ContractionParams p;
            p.D = cl_D;
            p.R = cl_R;
            p.geodesic_cap = cl_cap;
            p.D_grid = parse_int_list(cl_grid, "grid");
            auto outc = classify_element(G, parse_element(G, cl_element), p, cl_m);
            const char* kind = outc.kind == ElementClass::contracting ? "contracting"
                               : outc.kind == ElementClass::elliptic  ? "elliptic"
                                                                      : "non-contracting";
            emit_artifact(m, out, "classify.json",
                          render_json(Json{{"element", cl_element},
                                           {"class", kind},
                                           {"D_star", outc.D_star ? Json(*outc.D_star)
                                                                  : Json(nullptr)}}));
        };
        cmd->callback([&] { pending.emplace_back(&cl, "classify"); });
    }

    // --- genericity ------------------------------------------------------------------
    static Run gen;
    static std::string gen_ns, gen_grid = "1,2,4,8";
    static int gen_D = 2, gen_R = 4, gen_cap = 50, gen_m = 1, gen_samples = 0;
    static uint64_t gen_seed = 0;
    static long long gen_limit = 1000000;
    static bool gen_seed_set = false;
    {
        auto* cmd = app.add_subcommand("genericity",
                                       "fraction of D-contracting elements per ball");
        add_common(cmd, gen);
        cmd->add_option("--n", gen_ns, "comma-separated radii")->required();
        cmd->add_option("--D", gen_D, "contraction threshold")->check(CLI::PositiveNumber);
        cmd->add_option("--R", gen_R, "far-pair radius")->check(CLI::PositiveNumber);
        cmd->add_option("--grid", gen_grid, "comma-separated D grid");
        cmd->add_option("--cap", gen_cap, "geodesic cap")->check(CLI::PositiveNumber);
        cmd->add_option("--m", gen_m, "axis power")->check(CLI::PositiveNumber);
        cmd->add_option("--samples", gen_samples, "per-radius samples (0 = exhaustive)");
        cmd->add_option("--seed", gen_seed, "rng seed (required with --samples)")
            ->each([](const std::string&) { gen_seed_set = true; });
        cmd->add_option("--max-ball", gen_limit, "exhaustive ball-size limit");
        gen.body = [](const GroupModel& G, RunManifest& m, const fs::path& out) {
            gen.config["n"] = gen_ns;
            gen.config["D"] = gen_D;
            gen.config["R"] = gen_R;
            gen.config["grid"] = gen_grid;
            gen.config["cap"] = gen_cap;
            gen.config["m"] = gen_m;
            gen.config["samples"] = gen_samples;
            gen.config["seed"] = gen_seed;
            gen.config["max_ball"] = gen_limit;
            if (gen_samples > 0 && !gen_seed_set)
                throw usage_error("genericity: --seed is required with --samples");
            ContractionParams p;
            p.D = gen_D;
            p.R = gen_R;
            p.geodesic_cap = gen_cap;
            p.D_grid = parse_int_list(gen_grid, "grid");
            GenericityMode mode = gen_samples > 0
                                      ? GenericityMode::make_sampled(gen_samples, gen_seed)
                                      : GenericityMode::make_exhaustive();
            auto rows = genericity_experiment(G, parse_int_list(gen_ns, "n"), p, gen_m, mode,
                                              BigInt(gen_limit));
            emit_artifact(m, out, "genericity.csv", genericity_csv(rows));
            emit_artifact(m, out, "genericity.json", render_json(genericity_json(rows)));
        };
        cmd->callback([&] { pending.emplace_back(&gen, "genericity"); });
    }

    // --- lemma-check ------------------------------------------------------------------
    static Run lc;
    static std::string lc_check;
    static int lc_trials = 100;
    static uint64_t lc_seed = 0;
    static bool lc_seed_set = false;
    {
        auto* cmd = app.add_subcommand("lemma-check",
                                       "empirical verification of a projection statement");
        add_common(cmd, lc);
        cmd->add_option("--check", lc_check, "statement id")->required();
        cmd->add_option("--trials", lc_trials, "instances to evaluate")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", lc_seed, "rng seed")
            ->required()
            ->each([](const std::string&) { lc_seed_set = true; });
        lc.body = [](const GroupModel& G, RunManifest& m, const fs::path& out) {
            lc.config["check"] = lc_check;
            lc.config["trials"] = lc_trials;
            lc.config["seed"] = lc_seed;
            LemmaCheckReport rep = lemma_check(G, lc_check, lc_trials, lc_seed);
            emit_artifact(m, out, "lemma.json", render_json(lemma_report_json(rep)));
        };
        cmd->callback([&] { pending.emplace_back(&lc, "lemma-check"); });
    }

    // --- excursion ------------------------------------------------------------------
    static Run ex;
    static std::string ex_subgroup, ex_element, ex_ns;
    static int ex_K = 0, ex_cap = 40, ex_samples = 200;
    static uint64_t ex_seed = 0;
    static bool ex_seed_set = false;
    {
        auto* cmd = app.add_subcommand(
            "excursion", "coarse excursion of one element or a sampled log-law experiment");
        add_common(cmd, ex);
        cmd->add_option("--subgroup", ex_subgroup, "comma-separated vertex names")->required();
        cmd->add_option("--K", ex_K, "neighborhood radius")->check(CLI::NonNegativeNumber);
        cmd->add_option("--cap", ex_cap, "geodesic cap")->check(CLI::PositiveNumber);
        cmd->add_option("--element", ex_element, "single element mode");
        cmd->add_option("--n", ex_ns, "comma-separated radii (sampled mode)");
        cmd->add_option("--samples", ex_samples, "per-radius samples")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", ex_seed, "rng seed (required in sampled mode)")
            ->each([](const std::string&) { ex_seed_set = true; });
        ex.body = [](const GroupModel& G, RunManifest& m, const fs::path& out) {
            ex.config["subgroup"] = ex_subgroup;
            ex.config["K"] = ex_K;
            ex.config["cap"] = ex_cap;
            ex.config["element"] = ex_element;
            ex.config["n"] = ex_ns;
            ex.config["samples"] = ex_samples;
            ex.config["seed"] = ex_seed;
            SpecialSubgroup H = special_subgroup(G, parse_name_list(ex_subgroup));
            if (!ex_element.empty()) {
                ExcursionReport rep =
                    excursion_of_element(G, parse_element(G, ex_element), H, ex_K, ex_cap);
                std::string csv = excursion_csv_header() +
                                  excursion_csv_row(rep.g.length(), 0, to_string(rep.g), ex_K,
                                                    rep.excursion, rep.truncated);
                emit_artifact(m, out, "excursion.csv", csv);
                emit_artifact(
                    m, out, "excursion.json",
                    render_json(Json{{"element", to_string(rep.g)},
                                     {"K", ex_K},
                                     {"excursion", rep.excursion},
                                     {"witness_coset_rep", to_string(rep.witness.coset_rep)},
                                     {"witness_indices", {rep.witness.i, rep.witness.j}},
                                     {"geodesics_examined", rep.geodesics_examined},
                                     {"truncated", rep.truncated}}));
                return;
            }
            if (ex_ns.empty())
                throw usage_error("excursion: need --element or --n");
            if (!ex_seed_set) throw usage_error("excursion: --seed is required in sampled mode");
            LoglawResult res = loglaw_experiment(G, parse_int_list(ex_ns, "n"), ex_samples, H,
                                                 ex_K, ex_seed, ex_cap);
            emit_artifact(m, out, "excursion.csv", loglaw_csv(res));
            emit_artifact(m, out, "excursion.json", render_json(loglaw_json(res)));
        };
        cmd->callback([&] { pending.emplace_back(&ex, "excursion"); });
    }

    // --- probe-independence ------------------------------------------------------------
    static Run pr;
    static std::string pr_element, pr_subgroup, pr_rs = "3,4,5";
    static int pr_m = 3;
    {
        auto* cmd = app.add_subcommand("probe-independence",
                                       "axis projection diameters of subgroup cosets");
        add_common(cmd, pr);
        cmd->add_option("--element", pr_element, "element whose axis is probed")->required();
        cmd->add_option("--subgroup", pr_subgroup, "comma-separated vertex names")->required();
        cmd->add_option("--r", pr_rs, "comma-separated ball radii");
        cmd->add_option("--m", pr_m, "axis power")->check(CLI::PositiveNumber);
        pr.body = [](const GroupModel& G, RunManifest& m, const fs::path& out) {
            pr.config["element"] = pr_element;
            pr.config["subgroup"] = pr_subgroup;
            pr.config["r"] = pr_rs;
            pr.config["m"] = pr_m;
            SpecialSubgroup H = special_subgroup(G, parse_name_list(pr_subgroup));
            Element f = parse_element(G, pr_element);
            std::vector<int> rs = parse_int_list(pr_rs, "r");
            int rmax = *std::max_element(rs.begin(), rs.end());
            GeodesicAutomaton A = GeodesicAutomaton::build(G);
            BallIndex ball = cached_ball(A, rmax, cache_dir_from_env());
            Json rows = Json::array();
            for (int r : rs) {
                IndependenceProbe p = strong_independence_probe(G, f, H, r, pr_m, &ball);
                rows.push_back(Json{{"r", r},
                                    {"value", p.value},
                                    {"coset_rep", to_string(p.coset_rep)}});
            }
            emit_artifact(m, out, "probe.json",
                          render_json(Json{{"element", pr_element},
                                           {"m", pr_m},
                                           {"rows", rows}}));
        };
        cmd->callback([&] { pending.emplace_back(&pr, "probe-independence"); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }
    for (auto& [run, name] : pending) return execute(*run, name);
    return kExitUsage;
}
