#include "hdx/manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hdx/analysis.hpp"
#include "hdx/builders.hpp"
#include "hdx/parallel.hpp"

namespace hdx {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Manifest parse_manifest(const json& j) {
    Manifest mf;
    try {
        mf.raw = j;
        mf.schema = j.at("schema").get<int>();
        if (mf.schema != 1) throw ManifestError("unsupported manifest schema");
        mf.t = j.at("t").get<int>();
        mf.e = j.at("field").at("e").get<int>();
        mf.group = j.at("group");
        mf.codes = j.at("codes");
        if (j.contains("seed")) mf.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("budgets")) {
            auto& b = j.at("budgets");
            if (b.contains("coset_log2")) mf.coset_budget = 1ull << b.at("coset_log2").get<int>();
            if (b.contains("flip_local_log2")) mf.flip_budget = 1ull << b.at("flip_local_log2").get<int>();
        }
    } catch (const json::exception& ex) {
        throw ManifestError(std::string("manifest parse failure: ") + ex.what());
    }
    mf.hash = fnv1a_hex(j.dump());
    return mf;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ManifestError("cannot open manifest " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& ex) {
        throw ManifestError(std::string("manifest JSON parse failure: ") + ex.what());
    }
    return parse_manifest(j);
}

std::pair<std::uint32_t, std::vector<PermSet>> build_group(const Manifest& mf) {
    const json& g = mf.group;
    std::string kind;
    try {
        kind = g.at("kind").get<std::string>();
        if (kind == "z2e") {
            int m = g.at("m").get<int>();
            auto gens = g.at("generators").get<std::vector<std::vector<std::uint32_t>>>();
            if (static_cast<int>(gens.size()) != mf.t) throw ManifestError("one generator list per direction required");
            return group_z2e(m, gens);
        }
        if (kind == "cyclic") {
            std::uint32_t N = g.at("N").get<std::uint32_t>();
            auto gens = g.at("generators").get<std::vector<std::vector<std::uint32_t>>>();
            if (static_cast<int>(gens.size()) != mf.t) throw ManifestError("one generator list per direction required");
            return {N, cyclic_perms(N, gens)};
        }
        if (kind == "abelian_lift_product") {
            AbelianGroup H{g.at("H").get<std::vector<std::uint32_t>>()};
            BaseGraphSpec base;
            auto& bj = g.at("base");
            base.n = bj.at("n").get<int>();
            base.vertices = bj.at("vertices").get<std::uint32_t>();
            for (auto& ej : bj.at("edges")) {
                BaseEdge e;
                e.u = ej.at("u").get<std::uint32_t>();
                e.v = ej.at("v").get<std::uint32_t>();
                e.factor = ej.at("factor").get<int>();
                e.label = ej.at("label").get<std::vector<std::int64_t>>();
                if (ej.contains("label_rev")) e.label_rev = ej.at("label_rev").get<std::vector<std::int64_t>>();
                base.edges.push_back(std::move(e));
            }
            return abelian_lift_product(H, base, mf.t);
        }
    } catch (const json::exception& ex) {
        throw ManifestError(std::string("group stanza parse failure: ") + ex.what());
    }
    throw ManifestError("unknown group kind " + kind);
}

LocalCodes build_local_codes(const Manifest& mf) {
    Field F(mf.e);
    try {
        if (mf.codes.contains("matrices")) {
            auto raw = mf.codes.at("matrices").get<std::vector<std::vector<std::vector<int>>>>();
            if (static_cast<int>(raw.size()) != mf.t) throw ManifestError("one code matrix per direction required");
            std::vector<Mat> hs;
            for (auto& rm : raw) {
                Mat h(rm.size(), rm.empty() ? 0 : rm[0].size());
                for (std::size_t r = 0; r < rm.size(); ++r) {
                    if (rm[r].size() != h.cols()) throw ManifestError("ragged code matrix");
                    for (std::size_t c = 0; c < h.cols(); ++c) {
                        int v = rm[r][c];
                        if (v < 0 || v >= static_cast<int>(F.q())) throw ManifestError("code entry outside the field");
                        h.set(r, c, static_cast<felem>(v));
                    }
                }
                hs.push_back(std::move(h));
            }
            return make_codes(F, hs);
        }
        if (mf.codes.contains("search")) {
            auto& sj = mf.codes.at("search");
            int n = sj.at("n").get<int>();
            auto m = sj.at("m").get<std::vector<int>>();
            std::uint64_t trials = sj.value("trials", 1000ull);
            auto res = search_robust_tuple(mf.t, n, m, mf.e, trials, mf.coset_budget, mf.seed);
            if (res.best_h.empty()) throw ManifestError("code search returned no tuple");
            return make_codes(F, res.best_h);
        }
    } catch (const json::exception& ex) {
        throw ManifestError(std::string("codes stanza parse failure: ") + ex.what());
    }
    throw ManifestError("codes stanza must contain 'matrices' or 'search'");
}

Instance build_instance(const Manifest& mf) {
    auto [N, sets] = build_group(mf);
    Complex X = Complex::build(N, std::move(sets));
    return Instance{mf, SheafComplex(std::move(X), build_local_codes(mf))};
}

// ---- .hxm container: magic, version, endian tag, field degree, shape, triplets ----

void write_matrix_hxm(const Mat& M, int e, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoFailure("cannot open " + path);
    auto put32 = [&](std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); };
    auto put64 = [&](std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); };
    os.write("HXM1", 4);
    put32(1);
    put32(0x01020304u);
    put32(static_cast<std::uint32_t>(e));
    put64(M.rows());
    put64(M.cols());
    put64(M.nnz());
    for (std::size_t r = 0; r < M.rows(); ++r)
        for (std::size_t c = 0; c < M.cols(); ++c)
            if (M.at(r, c)) {
                put64(r);
                put64(c);
                std::uint16_t v = M.at(r, c);
                os.write(reinterpret_cast<const char*>(&v), 2);
            }
    if (!os) throw IoFailure("write failure on " + path);
}

Mat read_matrix_hxm(const std::string& path, int* e_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoFailure("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::string(magic, 4) != "HXM1") throw IoFailure("bad matrix container magic");
    auto get32 = [&]() {
        std::uint32_t v;
        is.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get64 = [&]() {
        std::uint64_t v;
        is.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    std::uint32_t version = get32();
    std::uint32_t endian = get32();
    if (version != 1 || endian != 0x01020304u) throw IoFailure("unsupported matrix container");
    std::uint32_t e = get32();
    std::uint64_t rows = get64(), cols = get64(), nnz = get64();
    Mat M(rows, cols);
    for (std::uint64_t i = 0; i < nnz; ++i) {
        std::uint64_t r = get64(), c = get64();
        std::uint16_t v;
        is.read(reinterpret_cast<char*>(&v), 2);
        if (!is) throw IoFailure("truncated matrix container");
        M.set(r, c, v);
    }
    if (e_out) *e_out = static_cast<int>(e);
    return M;
}

void write_bundle(const Instance& inst, const std::string& dir, const Report& build_report) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    fs::create_directories(dir + "/reports");
    {
        std::ofstream os(dir + "/manifest.json");
        os << inst.mf.raw.dump(2) << "\n";
    }
    const SheafComplex& S = inst.S;
    json info{{"manifest_hash", inst.mf.hash},
              {"t", S.t()},
              {"e", S.field().e()},
              {"N", S.X().group_size()},
              {"n", S.X().degree()},
              {"seed", inst.mf.seed}};
    json levels = json::array(), dims = json::array();
    for (int k = 0; k <= S.t(); ++k) {
        levels.push_back(S.X().level_size(k));
        dims.push_back(S.dim(k));
    }
    info["level_sizes"] = levels;
    info["chain_dims"] = dims;
    {
        std::ofstream os(dir + "/instance.json");
        os << info.dump(2) << "\n";
    }
    for (int i = 0; i < S.t(); ++i)
        write_matrix_hxm(S.delta(i), S.field().e(), dir + "/delta_" + std::to_string(i) + ".hxm");
    for (int i = 1; i <= S.t(); ++i)
        write_matrix_hxm(S.partial(i), S.field().e(), dir + "/partial_" + std::to_string(i) + ".hxm");
    {
        std::ofstream os(dir + "/reports/build.json");
        os << build_report.to_json().dump(2) << "\n";
    }
}

Manifest read_bundle_manifest(const std::string& dir) { return load_manifest(dir + "/manifest.json"); }

// ---- suites ----

Report suite_chain(const Instance& inst, const std::string& bundle_dir) {
    const SheafComplex& S = inst.S;
    Report rep = S.verify_chain(inst.mf.seed);
    rep.suite = "chain";
    // geometry counting identities
    rep.merge(S.X().count_check());
    // stored matrices must match the freshly assembled ones exactly
    if (!bundle_dir.empty()) {
        bool all_match = true;
        Field F2(1);
        for (int i = 0; i < S.t(); ++i) {
            Mat stored = read_matrix_hxm(bundle_dir + "/delta_" + std::to_string(i) + ".hxm");
            if (!(stored == S.delta(i))) all_match = false;
            // chain condition directly on the stored matrices
            if (i + 1 < S.t()) {
                Mat next = read_matrix_hxm(bundle_dir + "/delta_" + std::to_string(i + 1) + ".hxm");
                if (!next.mul(S.field(), stored).is_zero()) all_match = false;
            }
        }
        for (int i = 1; i <= S.t(); ++i) {
            Mat stored = read_matrix_hxm(bundle_dir + "/partial_" + std::to_string(i) + ".hxm");
            if (!(stored == S.partial(i))) all_match = false;
        }
        rep.add("bundle-matrices-consistent", "chain/bundle-consistency", all_match);
    }
    return rep;
}

Report suite_local(const Instance& inst, int jobs) {
    Report rep;
    rep.suite = "local";
    const SheafComplex& S = inst.S;
    const auto& codes = S.codes();
    const int t = S.t();
    // per-subset complexes: self checks and exactness
    for (std::uint32_t mask = 1; mask < (1u << t); ++mask) {
        std::vector<int> Sdirs;
        for (int j = 0; j < t; ++j)
            if (mask & (1u << j)) Sdirs.push_back(j);
        LocalComplex L(codes, Sdirs);
        std::string tag = "S" + std::to_string(mask);
        rep.add("local-selfcheck-" + tag, "local/chain-conditions", L.self_check().all_pass(), {{"mask", mask}});
        rep.add("local-exactness-" + tag, "local/exactness", exactness_check(L).all_pass(), {{"mask", mask}});
        // tensor kernel dimension
        auto K = tensor_kernel_basis(L);
        std::size_t expect = 1;
        for (int j : Sdirs) expect *= (codes.n - codes.m[static_cast<std::size_t>(j)]);
        rep.add("tensor-kernel-dim-" + tag, "local/tensor-code-dim", K.size() == expect,
                {{"dim", K.size()}, {"expect", expect}});
    }
    // local-global isomorphism on sampled faces
    {
        std::mt19937_64 rng(inst.mf.seed);
        bool ok = true;
        const Complex& X = S.X();
        int checked = 0;
        for (int it = 0; it < 50; ++it) {
            std::uniform_int_distribution<int> pl(0, t - 1);
            int lev = pl(rng);
            std::uniform_int_distribution<std::uint64_t> pf(0, X.level_size(lev) - 1);
            Face f = X.face_at(lev, pf(rng));
            std::vector<int> Sbar;
            for (int j = 0; j < t; ++j)
                if (!f.is_gen(j)) Sbar.push_back(j);
            if (Sbar.empty()) continue;
            LocalComplex L(codes, Sbar);
            int ell = L.ell();
            for (int ll = 0; ll < ell; ++ll)
                if (!(link_delta(S, f, ll) == L.delta(ll))) ok = false;
            for (int ll = 1; ll <= ell; ++ll)
                if (!(link_partial(S, f, ll) == L.partial(ll))) ok = false;
            ++checked;
        }
        rep.add("local-global-isomorphism", "local/link-isomorphism", ok && checked >= 25, {{"sampled", checked}});
    }
    // two-way robustness table
    auto tw = two_way_robustness(codes, inst.mf.coset_budget, jobs);
    rep.add("two-way-robustness", "local/two-way-robustness", tw.kappa > 0.0 || !tw.all_exact, tw.to_json());
    // single-direction ground truth
    {
        bool ok = true;
        for (int j = 0; j < t; ++j) {
            LocalComplex L(codes, {j});
            auto est = robustness(L, 0, inst.mf.coset_budget);
            // dual distance over n
            std::vector<Vec> rows;
            const Mat& h = codes.h[static_cast<std::size_t>(j)];
            for (std::size_t r = 0; r < h.rows(); ++r) {
                Vec v(h.cols());
                for (std::size_t c = 0; c < h.cols(); ++c) v[c] = h.at(r, c);
                rows.push_back(std::move(v));
            }
            SpanIter it(S.field(), rows, h.cols());
            std::size_t dperp = SIZE_MAX;
            do {
                if (!it.current().is_zero()) dperp = std::min(dperp, it.current().hamming_weight());
            } while (it.next());
            if (est.method == "exhaustive" &&
                std::abs(est.value() - static_cast<double>(dperp) / static_cast<double>(codes.n)) > 1e-12)
                ok = false;
        }
        rep.add("single-direction-dual-distance", "local/dual-distance-identity", ok);
    }
    return rep;
}

Report suite_walks(const Instance& inst, int jobs) {
    Report rep;
    rep.suite = "walks";
    const SheafComplex& S = inst.S;
    const Complex& X = S.X();
    const int t = S.t();
    auto sd = walk_spectral_data(X);
    rep.add("spectral-data", "walks/spectral-data", sd.lambda < 1.0,
            {{"lambda", sd.lambda}, {"r", sd.r}, {"min_component", sd.min_component}});

    json akl = json::object();
    for (int k = 1; k < t; ++k)
        for (int l = 0; l < k; ++l) {
            auto a = a_coeff(X, k, l);
            akl["a_" + std::to_string(k) + "_" + std::to_string(l)] = a;
            bool bound = a <= (1ull << t);
            bool topval = (k != t - 1) || (a == 1);
            rep.add("a-coeff-" + std::to_string(k) + "-" + std::to_string(l), "walks/neighbor-multiplicity",
                    bound && topval, {{"value", a}});
            rep.add("nb-multiset-" + std::to_string(k) + "-" + std::to_string(l), "walks/neighbor-covering",
                    nb_multiset_check(X, k, l, a), json::object());
        }

    for (int k = 0; k < t; ++k) {
        for (int l = 0; l <= k; ++l) {
            auto W = walk_W(X, k, l);
            bool markov = false, symm = false;
            if (W.matrix) {
                markov = W.matrix->rows_sum_to(Rat(1));
                symm = W.matrix->is_symmetric();
            }
            rep.add("walk-markov-" + std::to_string(k) + "-" + std::to_string(l), "walks/markov-symmetric",
                    W.matrix && markov && symm, {{"k", k}, {"l", l}});
            // opposite walk dominated by the adjacency form
            if (W.matrix) {
                RatMat wadj = W.matrix->scaled(Rat(static_cast<long long>(W.normalization)));
                RatMat oadj = op_adjacency(X, k, l);
                bool le = wadj.is_integral();
                for (std::size_t r = 0; r < oadj.rows() && le; ++r)
                    for (auto& [c, v] : oadj.row(r))
                        if (v > wadj.at(r, c)) le = false;
                rep.add("op-dominated-" + std::to_string(k) + "-" + std::to_string(l), "walks/opposite-dominated", le,
                        {{"k", k}, {"l", l}});
            }
            // quadratic-form ledger: random + adversarial sets
            if (W.matrix) {
                std::mt19937_64 rng(inst.mf.seed * 1000 + static_cast<std::uint64_t>(k * 10 + l));
                std::vector<std::vector<char>> sets;
                for (int rep_i = 0; rep_i < 200; ++rep_i) {
                    std::uniform_real_distribution<double> dens(0.01, 0.5);
                    std::bernoulli_distribution b(dens(rng));
                    std::vector<char> A(X.level_size(k));
                    for (auto& a : A) a = b(rng);
                    sets.push_back(std::move(A));
                }
                for (std::uint64_t vi = 0; vi < X.level_size(0); ++vi) {
                    std::vector<char> A(X.level_size(k), 0);
                    for (auto& f : X.link_up(X.face_at(0, vi), k)) A[X.index_of(f)] = 1;
                    sets.push_back(std::move(A));
                }
                // type classes
                std::uint64_t block = X.type_block_size(k);
                for (std::size_t ti = 0; ti < X.types_at(k).size(); ++ti) {
                    std::vector<char> A(X.level_size(k), 0);
                    for (std::uint64_t i = ti * block; i < (ti + 1) * block; ++i) A[i] = 1;
                    sets.push_back(std::move(A));
                }
                std::vector<char> results(sets.size(), 0);
                parallel_for(sets.size(), jobs, [&](std::size_t i) {
                    results[i] = quad_form_check(X, W, sets[i], sd.lambda, sd.r).pass ? 1 : 0;
                });
                std::size_t passes = 0;
                for (auto c : results)
                    if (c) ++passes;
                rep.add("walk-expansion-" + std::to_string(k) + "-" + std::to_string(l), "walks/expansion-bound",
                        passes == sets.size(), {{"sets", sets.size()}, {"passes", passes}});
            }
        }
        rep.merge(step_component_check(X, k, inst.mf.seed + static_cast<std::uint64_t>(k)));
    }
    rep.checks.insert(rep.checks.begin(),
                      Check{"a-coeff-table", "walks/neighbor-multiplicity", true, akl});
    return rep;
}

Report suite_distance(const Instance& inst, int jobs) {
    Report rep;
    rep.suite = "distance";
    const SheafComplex& S = inst.S;
    const int t = S.t();
    const std::uint64_t budget = inst.mf.coset_budget;

    // distances at every level, budget-aware
    std::vector<json> mu_cosyst(static_cast<std::size_t>(t), json());
    for (int k = 0; k < t; ++k) {
        auto muc = brute_mu(S, k, true, budget);
        auto dc = d_coloc(S, k, budget);
        mu_cosyst[static_cast<std::size_t>(k)] = muc.to_json();
        bool relation = true;
        if (!muc.infinite && muc.exact && !dc.infinite && dc.exact) relation = muc.value >= dc.value;
        rep.add("cosyst-vs-coloc-" + std::to_string(k), "distance/cosystolic-dominates-local", relation,
                {{"k", k}, {"mu_cosyst", muc.to_json()}, {"d_coloc", dc.to_json()}});
    }
    for (int k = 1; k <= t; ++k) {
        auto mus = brute_mu(S, k, false, budget);
        // reduction to the dual complex co-distance
        SheafComplex D = dual_complex(S);
        auto mud = brute_mu(D, t - k, true, budget);
        bool relation = true;
        json data{{"k", k}, {"mu_syst", mus.to_json()}, {"dual_mu_cosyst", mud.to_json()}};
        if (!mus.infinite && mus.exact && !mud.infinite && mud.exact) {
            double lhs = static_cast<double>(mus.value);
            double rhs = static_cast<double>(mud.value) /
                         std::pow(2.0 * S.X().degree() * t, static_cast<double>(t));
            relation = lhs >= rhs - 1e-12;
            data["bound"] = rhs;
        }
        rep.add("syst-vs-dual-cosyst-" + std::to_string(k), "distance/systolic-reduction", relation, data);
    }

    // locally co-minimal distance bound from the kappa table and walk data
    {
        auto sd = walk_spectral_data(S.X());
        auto tw = two_way_robustness(S.codes(), budget, jobs);
        // kappa_{l,k} = min over S of size l (primal side)
        std::map<std::pair<int, int>, double> kap;
        for (auto& c : tw.cells) {
            if (c.dual || c.est.method == "vacuous") continue;
            auto key = std::make_pair(static_cast<int>(c.S.size()), c.k);
            double v = c.est.upper;
            auto it = kap.find(key);
            if (it == kap.end() || v < it->second) kap[key] = v;
        }
        for (int k = 0; k < t; ++k) {
            bool have_all = true;
            for (int i = 0; i <= k; ++i)
                if (!kap.count({t - i, k - i})) have_all = false;
            if (!have_all) continue;
            double c1 = 0, c2 = 0;
            double n = S.X().degree();
            for (int l = 0; l <= k; ++l) {
                double prod_a = 1;
                for (int i = l; i <= k - 1; ++i) prod_a *= static_cast<double>(a_coeff(S.X(), k, i));
                double prod_k = 1;
                for (int i = l; i <= k; ++i) prod_k *= kap[{t - i, k - i}];
                double base = static_cast<double>(binom(k, l)) * static_cast<double>(binom(t - l, k - l)) *
                              (t - l) * std::pow(2.0, k - l) * prod_a / prod_k;
                c1 += base;
                c2 += static_cast<double>(binom(t, l)) * std::pow(2.0, t - l - 1) * std::pow(n, l) * base;
            }
            double bound = (1.0 - sd.lambda * c1) / c2 * sd.r * static_cast<double>(S.X().level_size(k));
            auto dc = d_coloc(S, k, budget);
            json data{{"k", k}, {"C1", c1}, {"C2", c2}, {"lambda", sd.lambda}, {"r", sd.r}, {"bound", bound},
                      {"d_coloc", dc.to_json()}};
            bool pass = true;
            if (bound > 0 && !dc.infinite && dc.exact) pass = static_cast<double>(dc.value) >= bound - 1e-9;
            data["vacuous"] = !(bound > 0);
            rep.add("coloc-lower-bound-" + std::to_string(k), "distance/local-cominimal-bound", pass, data);
        }
    }

    // cycle filling: boundaries fill, nontrivial classes obstruct
    {
        std::mt19937_64 rng(inst.mf.seed + 17);
        const Field& F = S.field();
        for (int k = 1; k < t; ++k) {
            bool fills = true;
            int rounds = 20;
            for (int it = 0; it < rounds; ++it) {
                Vec z0(S.dim(k + 1));
                std::uniform_int_distribution<std::uint32_t> dq(0, F.q() - 1);
                for (std::size_t c = 0; c < z0.size(); ++c) z0[c] = static_cast<felem>(dq(rng));
                Vec x = S.partial(k + 1).apply(F, z0);
                auto res = fill_cycle(S, k, x, budget);
                if (!res.filled || !(S.partial(k + 1).apply(F, res.z) == x)) fills = false;
            }
            rep.add("fill-boundaries-" + std::to_string(k), "distance/fill-boundaries", fills, {{"rounds", rounds}});
            auto mus = brute_mu(S, k, false, budget);
            if (!mus.infinite && mus.exact && mus.witness) {
                auto res = fill_cycle(S, k, *mus.witness, budget);
                rep.add("fill-obstruction-" + std::to_string(k), "distance/fill-obstruction",
                        res.obstruction && !res.filled, {{"k", k}});
            }
        }
    }

    // CSS extraction at interior levels
    {
        Field F2(1);
        for (int i = 1; i < t; ++i) {
            CssCode C = build_css(S, i);
            bool ortho = C.Hx.mul(F2, C.Hz.transpose()).is_zero();
            auto P = code_params(C, budget, inst.mf.seed);
            bool kid = P.k == P.k_kernel;
            auto prof = ldpc_profile(S, C);
            rep.add("css-level-" + std::to_string(i), "css/orthogonality-and-dimension", ortho && kid,
                    {{"i", i}, {"params", P.to_json()}, {"ldpc", prof.to_json()}});
            // soundness scans where certified scans fit
            if (C.Hx.cols() <= 22) {
                auto rx = soundness_scan(C.Hx, budget, inst.mf.seed);
                auto rz = soundness_scan(C.Hz, budget, inst.mf.seed);
                try {
                    auto ec = expansion(S, i, false, budget);
                    auto ecc = expansion(S, i, true, budget);
                    if (ec.defined && ecc.defined && rx.certified && rz.certified) {
                        double bound = soundness_lower_bound(C, ec.value, ecc.value);
                        double rho = std::min(rx.rho, rz.rho);
                        rep.add("qltc-soundness-bound-" + std::to_string(i), "css/soundness-bound",
                                bound <= rho + 1e-9, {{"bound", bound}, {"rho", rho}});
                    }
                } catch (const BudgetExceeded&) {
                    // expansion scan did not fit; nothing to assert
                }
            }
        }
    }
    return rep;
}

} // namespace hdx
