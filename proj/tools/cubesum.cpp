#include "cubesum/gz.hpp"
#include "cubesum/local.hpp"
#include "cubesum/x36.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <iostream>
#include <thread>

using namespace cubesum;
using nlohmann::json;

namespace
{

struct Config {
    long precision_bits = 192;
    double coeff_cutoff_factor = 1.0;
    int thread_count = 1;
    std::string cache_dir;
    std::string output = "json";
};

void log(const std::string &msg) { std::cerr << "cubesum: " << msg << "\n"; }

// text mode: one "path: value" line per leaf
void flatten(const json &j, const std::string &prefix, std::ostream &os)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

void emit(const Config &cfg, const json &j)
{
    if (cfg.output == "text")
        flatten(j, "", std::cout);
    else
        std::cout << j.dump(2) << "\n";
}

std::vector<int> parse_signs(const std::string &s)
{
    std::vector<int> out;
    for (char ch : s) {
        if (ch == '+')
            out.push_back(1);
        else if (ch == '-')
            out.push_back(-1);
        else if (ch == '0')
            out.push_back(0);
        else if (ch != ',' && ch != ' ')
            throw domain_error(std::string("bad sign character '") + ch + "'");
    }
    return out;
}

long product(const std::vector<long> &ps)
{
    long N = 1;
    for (long p : ps)
        N *= p;
    return N;
}

json point_json(const RatPoint &P)
{
    if (P.inf)
        return "infinity";
    return json{{"x", P.x.get_str()}, {"y", P.y.get_str()}};
}

// ---------------------------------------------------------------------------

int run_structure(const Config &cfg)
{
    json j;
    CurveK E(BigRat(1));
    std::vector<RatPoint> tors = torsion(E);
    RatPoint G = RatPoint::affine(BigRat(2), BigRat(3));
    int order = 0;
    for (int k = 1; k <= 12 && order == 0; ++k)
        if (mul(k, G, E).inf)
            order = k;
    bool cyclic6 = tors.size() == 6 && order == 6;
    for (const RatPoint &P : tors)
        j["torsion"]["points"].push_back(to_string(P));
    j["torsion"]["order"] = tors.size();
    j["torsion"]["generator"] = "(2, 3)";
    j["torsion"]["generator_order"] = order;
    j["torsion"]["ok"] = cyclic6;

    StructureReport r = verify_normalizer_table();
    std::vector<Cusp> classes = cusp_classes();
    for (const Cusp &c : r.cusps)
        j["cusps"].push_back(to_string(c));
    j["cusp_classes"] = classes.size();
    j["cusps_distinct"] = r.cusps_distinct;
    for (const RowCheck &row : r.rows)
        j["rows"].push_back({{"label", row.label},
                             {"alpha", to_string(row.alpha)},
                             {"image", to_string(row.image)},
                             {"expected", to_string(row.expected)},
                             {"normalizes", row.normalizes},
                             {"status", row.ok() ? "ok" : "fail"}});
    j["tau_bijective"] = r.tau_bijective;
    j["translations_on_cusps"] = r.translations_on_cusps;
    j["translations_as_matrices"] = r.translations_as_matrices;
    j["A_order_six"] = r.A_order_six;
    j["A_acts_as_unit"] = r.A_acts_as_unit;
    j["B_involution"] = r.B_involution;
    j["BA3_translation"] = r.BA3_translation;
    j["semidirect"] = r.semidirect;
    if (!r.errors.empty())
        j["errors"] = r.errors;
    bool ok = cyclic6 && r.ok() && classes.size() == 12 && r.cusps.size() == 12 && r.rows.size() == 12;
    j["ok"] = ok;
    emit(cfg, j);
    return ok ? 0 : 1;
}

int run_local(const Config &cfg, int samples, std::uint64_t seed)
{
    json j;
    bool ok = true;

    for (auto [lp, label] : {std::pair{LocalPair{3, 2, 1, KType::ramified, 2}, "ramified q=3 n=2 c=1"},
                             std::pair{LocalPair{5, 2, 2, KType::inert, 1}, "inert q=5 n=2 c=2"},
                             std::pair{LocalPair{3, 4, 3, KType::ramified, 2}, "ramified q=3 n=4 c=3"}}) {
        EpsilonDecision e = epsilon_dichotomy(lp);
        j["epsilon"].push_back({{"pair", label}, {"result", to_string(e.result)}, {"rule", e.rule}});
        ok = ok && e.result == Dichotomy::split;
    }

    for (long q : {3L, 5L, 9L})
        for (int c : {1, 2, 3}) {
            CosetReport r = coset_char_sums(LocalPair{q, c + 1, c, KType::ramified, 2});
            json x{{"q", q},
                   {"c", c},
                   {"group_order", r.group_order},
                   {"representatives", r.representatives},
                   {"characters_used", r.characters_used},
                   {"max_deviation", r.max_deviation},
                   {"ok", r.ok}};
            j["coset_sums"].push_back(x);
            ok = ok && r.ok;
        }

    for (long q : {3L, 5L})
        for (int c : {1, 2, 3}) {
            Beta0Report b = beta0(LocalPair{q, c + 1, c, KType::ramified, 2});
            j["beta0"].push_back({{"q", q},
                                  {"c", c},
                                  {"assembled", to_string(b.assembled)},
                                  {"closed_form", to_string(b.closed_form)},
                                  {"value", b.value.get_str()},
                                  {"match", b.match}});
            ok = ok && b.match;
        }

    auto R0 = eichler_basis(BigRat(1), BigRat(36));
    for (long N : {1L, 5L, 11L, 55L}) {
        Mat2 rho = rho_omega(N);
        OrderIntersection o = order_intersection(rho, R0);
        OrderIntersection a = order_intersection(rho, eichler_basis(BigRat(1), BigRat(1)));
        OrderIntersection b = order_intersection(rho, eichler_basis(BigRat(1, 9), BigRat(9)));
        bool row_ok = o.is_order && o.conductor == 6 * N && a.is_order && local_conductor(a.conductor, 3) == 3 &&
                      b.is_order && local_conductor(b.conductor, 3) == 1;
        j["orders"].push_back({{"N", N},
                               {"conductor", o.conductor.get_str()},
                               {"expected", 6 * N},
                               {"conductor_3_M2", local_conductor(a.conductor, 3).get_str()},
                               {"conductor_3_R9", local_conductor(b.conductor, 3).get_str()},
                               {"ok", row_ok}});
        ok = ok && row_ok;
    }

    for (long p : {5L, 11L}) {
        NormReport r = norm_congruence_check(p, samples, seed);
        json x{{"p", p},
               {"samples", r.samples},
               {"precision", r.precision},
               {"norm_failures", r.norm_failures},
               {"congruence_failures", r.congruence_failures},
               {"ok", r.ok()}};
        if (!r.counterexamples.empty())
            x["counterexamples"] = r.counterexamples;
        j["norms"].push_back(x);
        ok = ok && r.ok();
    }
    j["ok"] = ok;
    emit(cfg, j);
    return ok ? 0 : 1;
}

int run_heegner(const Config &cfg, const std::vector<long> &primes, const std::string &d_str)
{
    long N = product(primes);
    std::vector<long> ps = heegner_primes(N);
    BigRat d;
    if (d_str.empty()) {
        d = 1;
        for (long p : ps)
            d *= p_star(p);
    } else {
        d = BigRat(d_str);
        d.canonicalize();
    }
    log("heegner N=" + std::to_string(N) + " d=" + d.get_str() + " bits=" + std::to_string(cfg.precision_bits));
    HeegnerResult h = heegner_divisor(N, d, cfg.precision_bits, Real(1e-20), 4, cfg.thread_count);
    bool expect_zero = expected_vanishing(N, d);
    json j;
    j["N"] = N;
    j["d"] = d.get_str();
    j["precision"] = h.bits;
    j["z_re"] = h.z.re.str(30);
    j["z_im"] = h.z.im.str(30);
    j["status"] = to_string(h.cls.status);
    j["distance"] = h.cls.distance.str(5);
    j["expected"] = expect_zero ? "zero" : "nonzero";
    if (h.rec) {
        j["curve"] = h.rec->curve.tag();
        j["point"] = point_json(h.rec->P);
        j["height"] = h.rec->height_P.str(25);
        j["isogenous_point"] = point_json(h.rec->Q);
        j["height_isogenous"] = h.rec->height_Q.str(25);
    }
    bool ok = expect_zero ? h.cls.status == ZStatus::zero : h.cls.status != ZStatus::zero;
    j["ok"] = ok;
    emit(cfg, j);
    return ok ? 0 : 1;
}

int run_gz(const Config &cfg, const RunOptions &opt, const std::vector<long> &primes, const std::string &signs)
{
    std::vector<int> s = parse_signs(signs);
    log("gz primes=" + std::to_string(product(primes)) + " bits=" + std::to_string(cfg.precision_bits));
    GZReport r = gz_verify(primes, s, cfg.precision_bits, opt);
    json j = to_json(r);
    bool ok = r.omega_relation < Real(1e-20) &&
              (r.ratio_defined ? r.deviation < Real(1e-8) : r.torsion_consistent);
    j["ok"] = ok;
    emit(cfg, j);
    return ok ? 0 : 1;
}

int run_sweep(const Config &cfg, const RunOptions &opt, const std::vector<long> &primes, bool with_signs)
{
    log("sweep N=" + std::to_string(product(primes)) + " bits=" + std::to_string(cfg.precision_bits));
    SweepReport r = vanishing_sweep(primes, cfg.precision_bits, with_signs, opt);
    json j = to_json(r);
    j["ok"] = r.ok;
    emit(cfg, j);
    return r.ok ? 0 : 1;
}

int run_certify(const Config &cfg, const RunOptions &opt, const std::string &n_str)
{
    BigInt n;
    if (n.set_str(n_str, 10) != 0)
        throw domain_error("n must be an integer");
    log("certify n=" + n.get_str());
    Certificate c = certify(n, cfg.precision_bits, opt);
    json j = to_json(c);
    bool ok = c.verdict != Verdict::undecided && verify_certificate(c);
    emit(cfg, j);
    return ok ? 0 : 1;
}

int run_lvalue(const Config &cfg, const RunOptions &opt, const std::string &n_str, const std::string &k_str)
{
    precision_guard g(cfg.precision_bits);
    BigRat k;
    if (!k_str.empty()) {
        k = BigRat(k_str);
    } else {
        BigInt n(n_str);
        k = BigRat(n * n);
    }
    k.canonicalize();
    if (k == 0)
        throw domain_error("k must be nonzero");
    CurveK M = CurveK(k).minimal_twist();
    LSeries ls = make_lseries(M, opt.cutoff_factor, opt.cache);
    LValues lv = value_and_derivative(ls);
    json j;
    j["curve"] = M.tag();
    j["conductor"] = ls.conductor.get_str();
    j["sign"] = ls.sign;
    j["cutoff"] = ls.cutoff;
    j["residual_chosen"] = ls.residual_chosen.str(5);
    j["residual_rejected"] = ls.residual_rejected.str(5);
    j["L1"] = lv.value.str(30);
    if (ls.sign == -1)
        j["L1_derivative"] = lv.derivative.str(30);
    j["stability"] = lv.stability.str(5);
    bool ok = lv.stability < Real(1e-15);
    j["ok"] = ok;
    emit(cfg, j);
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Heegner points on X0(36), cube sums and height identities"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.add_option("--prec", cfg.precision_bits, "working precision in bits")
        ->envname("CUBESUM_PREC_BITS")
        ->check(CLI::Range(64L, 1L << 20));
    app.add_option("--cache-dir", cfg.cache_dir, "directory for the a_p cache")->envname("CUBESUM_CACHE_DIR");
    app.add_option("--cutoff-factor", cfg.coeff_cutoff_factor, "L-series truncation factor")
        ->check(CLI::Range(1.0, 1e6));
    app.add_option("--threads", cfg.thread_count, "worker threads (0: hardware)")->check(CLI::Range(0, 1024));
    app.add_option("--output", cfg.output, "report format")->check(CLI::IsMember({"json", "text"}));

    auto *structure = app.add_subcommand("structure", "torsion, cusps and the normalizer table");

    int samples = 200;
    std::uint64_t seed = 1;
    auto *local = app.add_subcommand("local", "local computations");
    local->add_option("--samples", samples, "random samples per prime for the norm check")->check(CLI::Range(1, 1000000));
    local->add_option("--seed", seed, "sample seed");

    std::vector<long> primes;
    std::string d_str, signs, n_str, k_str;
    bool with_signs = false;

    auto *heegner = app.add_subcommand("heegner", "the point z_d for N = product of primes");
    heegner->add_option("--primes", primes, "primes == 2, 5 mod 9")->required()->delimiter(',');
    heegner->add_option("--d", d_str, "twist parameter as a rational (default: prod p*)");

    auto *gz = app.add_subcommand("gz", "height identity for n = prod p_i*^{e_i}");
    gz->add_option("--primes", primes, "primes == 2, 5 mod 9")->required()->delimiter(',');
    gz->add_option("--signs", signs, "one of + or - per prime")->required();

    auto *sweep = app.add_subcommand("sweep", "vanishing pattern over the d-grid");
    sweep->add_option("--primes", primes, "primes == 2, 5 mod 9")->required()->delimiter(',');
    sweep->add_flag("--signs", with_signs, "also compute root numbers");

    auto *cert = app.add_subcommand("certify", "decide whether 2n is a sum of two rational cubes");
    cert->add_option("--n", n_str, "nonzero integer")->required();

    auto *lvalue = app.add_subcommand("lvalue", "L(1) and L'(1) of y^2 = x^3 + k");
    auto *lv_n = lvalue->add_option("--n", n_str, "k = n^2");
    lvalue->add_option("--k", k_str, "rational k")->excludes(lv_n);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }
    if (lvalue->parsed() && n_str.empty() && k_str.empty()) {
        std::cerr << "lvalue: one of --n, --k is required\n";
        return 2;
    }
    if (cfg.thread_count == 0)
        cfg.thread_count = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    set_default_precision(cfg.precision_bits);

    ApCache cache(cfg.cache_dir);
    RunOptions opt;
    opt.cutoff_factor = cfg.coeff_cutoff_factor;
    opt.cache = cfg.cache_dir.empty() ? nullptr : &cache;
    opt.threads = cfg.thread_count;

    auto t0 = std::chrono::steady_clock::now();
    int rc = 2;
    try {
        if (structure->parsed())
            rc = run_structure(cfg);
        else if (local->parsed())
            rc = run_local(cfg, samples, seed);
        else if (heegner->parsed())
            rc = run_heegner(cfg, primes, d_str);
        else if (gz->parsed())
            rc = run_gz(cfg, opt, primes, signs);
        else if (sweep->parsed())
            rc = run_sweep(cfg, opt, primes, with_signs);
        else if (cert->parsed())
            rc = run_certify(cfg, opt, n_str);
        else if (lvalue->parsed())
            rc = run_lvalue(cfg, opt, n_str, k_str);
    } catch (const std::invalid_argument &e) {
        log(std::string("error: ") + e.what());
        return 2;
    } catch (const std::exception &e) {
        log(std::string("failure: ") + e.what());
        return 1;
    }
    if (opt.cache) {
        cache.flush();
        for (const auto &w : cache.warnings())
            log("cache: " + w);
    }
    log("done in " + std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) +
        " s, exit " + std::to_string(rc));
    return rc;
}
