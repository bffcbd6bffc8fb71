#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "hdx/analysis.hpp"
#include "hdx/builders.hpp"
#include "hdx/css.hpp"
#include "hdx/local.hpp"
#include "hdx/manifest.hpp"
#include "hdx/parallel.hpp"

using namespace hdx;

namespace {

constexpr int kExitManifest = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitVerification = 4;
constexpr int kExitBudget = 5;

void emit(const json& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream os(out);
    if (!os) throw IoFailure("cannot open " + out);
    os << j.dump(2) << "\n";
}

Instance load_instance_from_bundle(const std::string& bundle) {
    Manifest mf = read_bundle_manifest(bundle);
    return build_instance(mf);
}

int cmd_build(const std::string& manifest_path, const std::string& out_dir) {
    Manifest mf;
    try {
        mf = load_manifest(manifest_path);
    } catch (const ManifestError& ex) {
        std::cerr << "manifest error: " << ex.what() << "\n";
        return kExitManifest;
    }
    try {
        Instance inst = build_instance(mf);
        Report rep = inst.S.X().count_check();
        rep.merge(inst.S.verify_chain(mf.seed));
        rep.suite = "build";
        write_bundle(inst, out_dir, rep);
        std::cout << rep.to_json().dump(2) << "\n";
        return rep.all_pass() ? 0 : kExitVerification;
    } catch (const ManifestError& ex) {
        std::cerr << "manifest error: " << ex.what() << "\n";
        return kExitManifest;
    } catch (const Error& ex) {
        std::cerr << "construction error: " << ex.what() << "\n";
        return kExitConstruction;
    }
}

int cmd_verify(const std::string& bundle, const std::string& suite, int jobs, const std::string& out) {
    Instance inst = load_instance_from_bundle(bundle);
    Report all;
    all.suite = suite;
    if (suite == "chain" || suite == "all") all.merge(suite_chain(inst, bundle));
    if (suite == "local" || suite == "all") all.merge(suite_local(inst, jobs));
    if (suite == "walks" || suite == "all") all.merge(suite_walks(inst, jobs));
    if (suite == "distance" || suite == "all") all.merge(suite_distance(inst, jobs));
    json j = all.to_json();
    j["manifest_hash"] = inst.mf.hash;
    j["suite"] = suite;
    emit(j, out);
    return all.all_pass() ? 0 : kExitVerification;
}

int cmd_search(int t, int n, std::vector<int> m, int e, std::uint64_t trials, bool exhaust, int budget_log2,
               std::uint64_t seed, int jobs, const std::string& out) {
    try {
        auto res = search_robust_tuple(t, n, m, e, exhaust ? UINT64_MAX / 2 : trials, 1ull << budget_log2, seed, jobs);
        json census = json::array();
        for (auto& [kappa, count] : res.census) census.push_back({{"kappa", kappa}, {"count", count}});
        json best = json::array();
        for (auto& h : res.best_h) {
            json rows = json::array();
            for (std::size_t r = 0; r < h.rows(); ++r) {
                json row = json::array();
                for (std::size_t c = 0; c < h.cols(); ++c) row.push_back(h.at(r, c));
                rows.push_back(row);
            }
            best.push_back(rows);
        }
        emit(json{{"kappa", res.kappa},
                  {"exhaustive", res.exhaustive},
                  {"tuples_scored", res.tuples_scored},
                  {"seed", res.seed},
                  {"census", census},
                  {"best", best}},
             out);
        return 0;
    } catch (const BudgetExceeded& ex) {
        std::cerr << "budget exceeded: " << ex.what() << "\n";
        return kExitBudget;
    }
}

int cmd_distance(const std::string& bundle, int level, const std::string& mode, int budget_log2,
                 const std::string& out) {
    Instance inst = load_instance_from_bundle(bundle);
    std::uint64_t budget = 1ull << budget_log2;
    json j{{"manifest_hash", inst.mf.hash}, {"level", level}, {"mode", mode}};
    bool partial = false;
    try {
        if (mode == "syst" || mode == "cosyst") {
            auto v = brute_mu(inst.S, level, mode == "cosyst", budget);
            j["result"] = v.to_json();
            partial = !v.exact && !v.infinite;
        } else if (mode == "coloc") {
            auto v = d_coloc(inst.S, level, budget);
            j["result"] = v.to_json();
            partial = !v.exact && !v.infinite;
        } else if (mode == "cyc" || mode == "cocyc") {
            auto v = expansion(inst.S, level, mode == "cocyc", budget);
            j["result"] = v.to_json();
        } else {
            std::cerr << "unknown mode " << mode << "\n";
            return kExitManifest;
        }
    } catch (const BudgetExceeded& ex) {
        j["error"] = std::string("budget exceeded: ") + ex.what();
        emit(j, out);
        return kExitBudget;
    }
    emit(j, out);
    return partial ? kExitBudget : 0;
}

int cmd_decode_sim(const std::string& bundle, int level, double p, int max_weight, std::uint64_t shots,
                   std::uint64_t seed, std::size_t max_iters, double syndrome_p, int jobs, const std::string& out) {
    Instance inst = load_instance_from_bundle(bundle);
    const SheafComplex& S = inst.S;
    const Field& F = S.field();
    if (level < 0 || level > S.t() - 1) {
        std::cerr << "level out of range\n";
        return kExitManifest;
    }
    std::vector<int> weights;
    if (max_weight > 0)
        for (int w = 1; w <= max_weight; ++w) weights.push_back(w);
    json curve = json::array();
    for (int w : weights.empty() ? std::vector<int>{0} : weights) {
        std::vector<char> clear_ok(shots, 0), logical_ok(shots, 0);
        parallel_for(shots, jobs, [&](std::size_t shot) {
            std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + shot * 1000003ull + static_cast<std::uint64_t>(w));
            Vec e(S.dim(level));
            if (w > 0) {
                std::uniform_int_distribution<std::size_t> pc(0, S.dim(level) - 1);
                std::uniform_int_distribution<std::uint32_t> dv(1, F.q() - 1);
                for (int i = 0; i < w; ++i) e[pc(rng)] = static_cast<felem>(dv(rng));
            } else {
                std::bernoulli_distribution berr(p);
                std::uniform_int_distribution<std::uint32_t> dv(1, F.q() - 1);
                for (std::size_t c = 0; c < e.size(); ++c)
                    if (berr(rng)) e[c] = static_cast<felem>(dv(rng));
            }
            Vec syn = S.delta(level).apply(F, e);
            if (syndrome_p > 0) {
                std::bernoulli_distribution bs(syndrome_p);
                std::uniform_int_distribution<std::uint32_t> dv(1, F.q() - 1);
                for (std::size_t c = 0; c < syn.size(); ++c)
                    if (bs(rng)) syn[c] ^= static_cast<felem>(dv(rng));
            }
            auto res = small_set_flip_decode(S, level, syn, max_iters, inst.mf.flip_budget);
            if (res.success) {
                clear_ok[shot] = 1;
                Vec diff = res.correction;
                diff.add_inplace(e);
                // logical success: the residual error is a coboundary
                if (syndrome_p == 0) {
                    bool triv = false;
                    if (level == 0) {
                        triv = diff.is_zero();
                    } else {
                        auto sol = solve_linear(F, S.delta(level - 1), diff);
                        triv = sol.has_value();
                    }
                    if (triv) logical_ok[shot] = 1;
                }
            }
        });
        std::size_t nclear = 0, nlog = 0;
        for (std::size_t i = 0; i < shots; ++i) {
            nclear += clear_ok[i];
            nlog += logical_ok[i];
        }
        curve.push_back({{"weight", w},
                         {"shots", shots},
                         {"syndrome_cleared", nclear},
                         {"logical_success", nlog}});
    }
    emit(json{{"manifest_hash", inst.mf.hash},
              {"level", level},
              {"p", p},
              {"syndrome_p", syndrome_p},
              {"seed", seed},
              {"curve", curve}},
         out);
    return 0;
}

int cmd_export(const std::string& bundle, int level, const std::string& family, const std::string& format,
               const std::string& out) {
    Instance inst = load_instance_from_bundle(bundle);
    CssCode C = build_css(inst.S, level);
    const Mat& H = (family == "x") ? C.Hx : C.Hz;
    if (out.empty() || out == "-") {
        if (format == "alist")
            export_alist(H, std::cout);
        else if (format == "mtx")
            export_mtx(H, std::cout);
        else
            export_json_matrix(H, std::cout);
        return 0;
    }
    write_matrix_file(H, out, format);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubical sheaf chain-complex workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    int jobs = default_jobs();
    app.add_option("--jobs", jobs, "worker pool size (default: HDX_JOBS or hardware)");

    std::string manifest_path, bundle, out, suite = "all", mode = "cosyst", family = "x", format = "alist";
    int level = 1, budget_log2 = 22, t = 2, n = 3, e = 1, max_weight = 0;
    std::vector<int> mvec;
    std::uint64_t trials = 1000, seed = 1, shots = 100;
    std::size_t max_iters = 10000;
    double p = 0.0, syndrome_p = 0.0;
    bool exhaust = false;

    auto* cb = app.add_subcommand("build", "build an instance bundle from a manifest");
    cb->add_option("--manifest", manifest_path)->required();
    cb->add_option("--out", out)->required();

    auto* cv = app.add_subcommand("verify", "run verification suites over a bundle");
    cv->add_option("--bundle", bundle)->required();
    cv->add_option("--suite", suite)->check(CLI::IsMember({"chain", "local", "walks", "distance", "all"}));
    cv->add_option("--out", out);

    auto* cs = app.add_subcommand("search", "search robust local code tuples");
    cs->add_option("--t", t)->required();
    cs->add_option("--n", n)->required();
    cs->add_option("--m", mvec)->required()->delimiter(',');
    cs->add_option("--q-log2,--e", e, "field degree e (q = 2^e)");
    cs->add_option("--trials", trials);
    cs->add_flag("--exhaust", exhaust);
    cs->add_option("--budget", budget_log2, "log2 of the enumeration budget");
    cs->add_option("--seed", seed);
    cs->add_option("--out", out);

    auto* cd = app.add_subcommand("distance", "distance / expansion measurement");
    cd->add_option("--bundle", bundle)->required();
    cd->add_option("--level", level)->required();
    cd->add_option("--mode", mode)->check(CLI::IsMember({"syst", "cosyst", "coloc", "cyc", "cocyc"}));
    cd->add_option("--budget", budget_log2);
    cd->add_option("--out", out);

    auto* cds = app.add_subcommand("decode-sim", "small-set flip decoding simulation");
    cds->add_option("--bundle", bundle)->required();
    cds->add_option("--level", level)->required();
    cds->add_option("--p", p, "iid error rate per coordinate");
    cds->add_option("--max-weight", max_weight, "sweep planted error weights 1..w");
    cds->add_option("--shots", shots);
    cds->add_option("--seed", seed);
    cds->add_option("--max-iters", max_iters);
    cds->add_option("--syndrome-p", syndrome_p, "syndrome noise rate");
    cds->add_option("--out", out);

    auto* ce = app.add_subcommand("export", "export parity-check matrices");
    ce->add_option("--bundle", bundle)->required();
    ce->add_option("--level", level)->required();
    ce->add_option("--family", family)->check(CLI::IsMember({"x", "z"}));
    ce->add_option("--format", format)->check(CLI::IsMember({"alist", "mtx", "json"}));
    ce->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cb->parsed()) return cmd_build(manifest_path, out);
        if (cv->parsed()) return cmd_verify(bundle, suite, jobs, out);
        if (cs->parsed()) return cmd_search(t, n, mvec, e, trials, exhaust, budget_log2, seed, jobs, out);
        if (cd->parsed()) return cmd_distance(bundle, level, mode, budget_log2, out);
        if (cds->parsed())
            return cmd_decode_sim(bundle, level, p, max_weight, shots, seed, max_iters, syndrome_p, jobs, out);
        if (ce->parsed()) return cmd_export(bundle, level, family, format, out);
    } catch (const ManifestError& ex) {
        std::cerr << "manifest error: " << ex.what() << "\n";
        return kExitManifest;
    } catch (const BudgetExceeded& ex) {
        std::cerr << "budget exceeded: " << ex.what() << "\n";
        return kExitBudget;
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitConstruction;
    }
    return 0;
}
