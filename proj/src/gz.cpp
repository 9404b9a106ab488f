#include "cubesum/gz.hpp"

#include <chrono>

namespace cubesum
{

namespace
{

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

long product(const std::vector<long> &ps)
{
    long N = 1;
    for (long p : ps)
        N *= p;
    return N;
}

template <class F>
auto stage(const std::string &name, F &&f)
{
    try {
        return f();
    } catch (const std::exception &e) {
        throw numeric_failure("stage " + name + ": " + e.what());
    }
}

std::string dec(const Real &x, int digits = 25) { return x.str(digits); }

// e_i of d in terms of p_i*
std::vector<int> star_exponents(const std::vector<long> &primes, const BigRat &d)
{
    std::vector<int> e;
    for (long p : primes) {
        int v = valuation(d, BigInt(p));
        e.push_back(p % 9 == 2 ? v : -v);
    }
    return e;
}

} // namespace

BigRat twist_parameter(const std::vector<long> &primes, const std::vector<int> &signs)
{
    if (primes.size() != signs.size())
        throw domain_error("one sign per prime");
    BigRat d = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        BigRat s = p_star(primes[i]);
        if (signs[i] == 1)
            d *= s;
        else if (signs[i] == -1)
            d /= s;
        else if (signs[i] != 0)
            throw domain_error("signs must be -1, 0 or 1");
    }
    d.canonicalize();
    return d;
}

GZReport gz_verify(const std::vector<long> &primes, const std::vector<int> &signs, long bits, const RunOptions &opt)
{
    auto t0 = std::chrono::steady_clock::now();
    precision_guard g(bits);
    GZReport r;
    r.primes = primes;
    r.signs = signs;
    r.bits = bits;
    long N = product(primes);
    heegner_primes(N);
    long sum = 0;
    for (int s : signs) {
        if (s != 1 && s != -1)
            throw domain_error("signs must be +1 or -1");
        sum += s;
    }
    if (mod(sum, 3) != 1)
        throw domain_error("the signs must sum to 1 mod 3");
    r.d = twist_parameter(primes, signs);
    r.curve_n = CurveK(r.d * r.d).minimal_twist();
    r.curve_ninv = CurveK(BigRat(1) / (r.d * r.d)).minimal_twist();

    HeegnerResult h = stage("heegner", [&] { return heegner_divisor(N, r.d, bits, Real(1e-20), 4, opt.threads); });
    precision_guard g2(bits);
    r.heegner_bits = h.bits;
    r.status = h.cls.status;
    r.height = Real(0);
    if (h.rec) {
        r.point = h.rec->P;
        r.height = h.rec->height_Q;
    }

    LSeries ln = stage("lseries", [&] { return make_lseries(r.curve_n, opt.cutoff_factor, opt.cache); });
    LSeries li = stage("lseries", [&] { return make_lseries(r.curve_ninv, opt.cutoff_factor, opt.cache); });
    r.sign_n = ln.sign;
    r.sign_ninv = li.sign;
    if (ln.sign != -1 || li.sign != 1)
        throw numeric_failure("stage lseries: unexpected root numbers " + std::to_string(ln.sign) + ", " +
                              std::to_string(li.sign));
    r.L_deriv = stage("lseries", [&] { return value_and_derivative(ln).derivative; });
    r.L_value = stage("lseries", [&] { return value_and_derivative(li).value; });

    r.omega_n = periods(r.curve_n).omega;
    r.omega_ninv = periods(r.curve_ninv).omega;
    Real omega = periods(CurveK(BigRat(1))).omega;
    r.omega_relation = abs(r.omega_n * r.omega_ninv * Real(N) / (omega * omega) - Real(1));

    r.lhs = r.L_deriv * r.L_value / (r.omega_n * r.omega_ninv);
    r.rhs = r.height / Real(27);
    Real tol(1e-8);
    r.ratio_defined = r.lhs > tol * Real(10) && r.rhs > tol * Real(10);
    if (r.ratio_defined) {
        r.ratio = r.lhs / r.rhs;
        r.deviation = abs(r.ratio - Real(1));
    } else {
        r.ratio = Real(0);
        r.deviation = Real(0);
        r.torsion_consistent = r.rhs.is_zero() && r.lhs < tol;
    }
    r.seconds = seconds_since(t0);
    return r;
}

nlohmann::json to_json(const GZReport &r)
{
    nlohmann::json j;
    j["primes"] = r.primes;
    j["signs"] = r.signs;
    j["d"] = to_string(r.d);
    j["curve_n"] = r.curve_n.tag();
    j["curve_ninv"] = r.curve_ninv.tag();
    j["precision"] = r.bits;
    j["heegner_precision"] = r.heegner_bits;
    j["status"] = to_string(r.status);
    j["sign_n"] = r.sign_n;
    j["sign_ninv"] = r.sign_ninv;
    j["L_deriv"] = dec(r.L_deriv);
    j["L_value"] = dec(r.L_value);
    j["omega_n"] = dec(r.omega_n);
    j["omega_ninv"] = dec(r.omega_ninv);
    j["omega_relation"] = dec(r.omega_relation, 5);
    j["height"] = dec(r.height);
    j["lhs"] = dec(r.lhs);
    j["rhs"] = dec(r.rhs);
    j["ratio_defined"] = r.ratio_defined;
    if (r.ratio_defined) {
        j["ratio"] = dec(r.ratio);
        j["deviation"] = dec(r.deviation, 5);
    } else {
        j["torsion_consistent"] = r.torsion_consistent;
    }
    if (r.point)
        j["point"] = to_string(*r.point);
    j["runtime_s"] = r.seconds;
    return j;
}

std::string expected_status(const std::vector<int> &eps)
{
    long sum = 0;
    for (int e : eps) {
        if (e == 0)
            return "zero";
        sum += e;
    }
    switch (mod(sum, 3)) {
    case 1: return "point";
    case 2: return "zero";
    default: return "zero_or_torsion";
    }
}

SweepReport vanishing_sweep(const std::vector<long> &primes, long bits, bool with_signs, const RunOptions &opt,
                            const Real &zero_tol)
{
    auto t0 = std::chrono::steady_clock::now();
    precision_guard g(bits);
    if (primes.size() % 2 == 0)
        throw domain_error("the classification needs an odd number of primes");
    long N = product(primes);
    SweepReport rep;
    rep.primes = heegner_primes(N);
    rep.bits = bits;
    OrbitValues ov = heegner_orbit(N, bits, opt.threads);
    rep.classes = ov.f.size();
    rep.ok = true;
    for (const BigRat &d : d_grid(N)) {
        SweepRow row;
        row.d = d;
        row.eps = star_exponents(rep.primes, d);
        Classified c = classify(divisor_value(ov, d), ov.L, zero_tol);
        row.status = c.status;
        row.distance = c.distance;
        row.expected = expected_status(row.eps);
        if (row.expected == "zero")
            row.consistent = c.status == ZStatus::zero;
        else if (row.expected == "point")
            row.consistent = c.status == ZStatus::point;
        else
            row.consistent = c.status != ZStatus::point;
        if (with_signs) {
            row.sign = make_lseries(CurveK(d * d).minimal_twist(), opt.cutoff_factor, opt.cache).sign;
            long sum = 0;
            for (int e : row.eps)
                sum += e;
            row.sign_rule = (row.sign == -1) == (mod(sum, 3) == 1);
            if (c.status == ZStatus::point && row.sign != -1)
                row.consistent = false;
        }
        rep.ok = rep.ok && row.consistent;
        rep.rows.push_back(row);
    }
    rep.checks = orbit_checks(ov);
    Real t(1e-20);
    rep.ok = rep.ok && rep.checks.divisor_sum < t && rep.checks.conjugation < t && rep.checks.conj_sum < t;
    rep.seconds = seconds_since(t0);
    return rep;
}

nlohmann::json to_json(const SweepReport &r)
{
    nlohmann::json j;
    j["primes"] = r.primes;
    j["precision"] = r.bits;
    j["classes"] = r.classes;
    for (const SweepRow &row : r.rows) {
        nlohmann::json x;
        x["d"] = to_string(row.d);
        x["eps"] = row.eps;
        x["status"] = to_string(row.status);
        x["expected"] = row.expected;
        x["consistent"] = row.consistent;
        x["distance"] = dec(row.distance, 5);
        if (row.sign != 0) {
            x["sign"] = row.sign;
            x["sign_rule"] = row.sign_rule;
        }
        j["rows"].push_back(x);
    }
    j["divisor_sum"] = dec(r.checks.divisor_sum, 5);
    j["conjugation"] = dec(r.checks.conjugation, 5);
    j["conj_sum"] = dec(r.checks.conj_sum, 5);
    j["omega_action"] = dec(r.checks.omega_action, 5);
    j["omega2_split"] = dec(r.checks.omega2_split, 5);
    j["ok"] = r.ok;
    j["runtime_s"] = r.seconds;
    return j;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::cube_sum: return "cube_sum";
    case Verdict::not_cube_sum: return "not_cube_sum";
    case Verdict::undecided: return "undecided";
    }
    return "?";
}

Certificate certify(const BigInt &n_in, long bits, const RunOptions &opt)
{
    precision_guard g(bits);
    if (n_in == 0)
        throw domain_error("n must be nonzero");
    Certificate c;
    c.n = n_in;
    c.bits = bits;
    BigInt n = abs(n_in);
    // n = d m^3 with d = prod p^{+-1}
    BigRat d = 1, m = 1;
    std::vector<long> primes;
    std::vector<int> signs;
    for (const auto &[p, e] : factor(n)) {
        long q = p.get_si();
        for (int i = 0; i < e / 3; ++i)
            m *= p;
        if (e % 3 == 0)
            continue;
        if (q == 2 || (q % 9 != 2 && q % 9 != 5))
            throw domain_error("prime " + p.get_str() + " is not an odd prime == 2, 5 mod 9");
        if (e % 3 == 1) {
            d *= p;
        } else {
            d /= p;
            m *= p;
        }
        primes.push_back(q);
    }
    if (primes.empty())
        throw domain_error("n is a cube: 2n = n^(1/3)^3 + n^(1/3)^3 is excluded by convention");
    d.canonicalize();
    c.d = d;
    std::vector<int> eps = star_exponents(primes, d);
    long sum = 0;
    for (int e : eps)
        sum += e;

    CurveK E = CurveK(BigRat(n * n));
    BigRat u;
    CurveK M = E.minimal_twist(&u);
    LSeries ls = make_lseries(M, opt.cutoff_factor, opt.cache);
    c.sign = ls.sign;

    if (c.sign == -1) {
        if (mod(sum, 3) != 1) {
            c.diagnostics.push_back("root number -1 outside the Heegner range");
            return c;
        }
        try {
            long N = product(primes);
            HeegnerResult h = heegner_divisor(N, d, bits, Real(1e-20), 4, opt.threads);
            if (!h.rec) {
                c.diagnostics.push_back("z_n classified " + to_string(h.cls.status));
                return c;
            }
            // P lies on the minimal model y^2 = x^3 + d^2 s^6; E = M scaled back by 1/u
            BigRat s;
            CurveK Md = CurveK(d * d).minimal_twist(&s);
            if (Md.k != M.k)
                throw numeric_failure("minimal models of E^(n) and E^(d) differ");
            RatPoint P = rescale(h.rec->P, BigRat(1) / u);
            auto [a, b] = cube_sum_extract(P, n);
            if (n_in < 0) {
                a = -a;
                b = -b;
            }
            c.a = a;
            c.b = b;
            c.verdict = Verdict::cube_sum;
            c.bits = h.bits;
            if (!verify_certificate(c))
                throw numeric_failure("witness failed the exact check");
        } catch (const numeric_failure &e) {
            c.verdict = Verdict::undecided;
            c.diagnostics.push_back(e.what());
        }
        return c;
    }

    LValues lv = value_and_derivative(ls);
    c.L1 = lv.value.str(30);
    c.stability = lv.stability.str(5);
    if (lv.stability < Real(1e-15) && lv.value > Real(10) * max(lv.stability, Real(1e-15)))
        c.verdict = Verdict::not_cube_sum;
    else
        c.diagnostics.push_back("L(1) is not stably nonzero");
    return c;
}

bool verify_certificate(const Certificate &c)
{
    if (c.verdict != Verdict::cube_sum)
        return true;
    return c.a != 0 && c.b != 0 && c.a * c.a * c.a + c.b * c.b * c.b == BigRat(2 * c.n);
}

nlohmann::json to_json(const Certificate &c)
{
    nlohmann::json j;
    j["n"] = c.n.get_str();
    j["verdict"] = to_string(c.verdict);
    j["d"] = to_string(c.d);
    j["sign"] = c.sign;
    j["precision"] = c.bits;
    if (c.verdict == Verdict::cube_sum) {
        j["witness"] = {{"a", to_string(c.a)}, {"b", to_string(c.b)}};
        j["exact_check"] = verify_certificate(c);
    }
    if (!c.L1.empty()) {
        j["L1"] = c.L1;
        j["stability"] = c.stability;
    }
    if (!c.diagnostics.empty())
        j["diagnostics"] = c.diagnostics;
    return j;
}

Certificate certificate_from_json(const nlohmann::json &j)
{
    Certificate c;
    c.n = BigInt(j.at("n").get<std::string>());
    std::string v = j.at("verdict").get<std::string>();
    if (v == "cube_sum")
        c.verdict = Verdict::cube_sum;
    else if (v == "not_cube_sum")
        c.verdict = Verdict::not_cube_sum;
    else if (v == "undecided")
        c.verdict = Verdict::undecided;
    else
        throw domain_error("unknown verdict " + v);
    c.d = parse_rational(j.at("d").get<std::string>());
    c.sign = j.at("sign").get<int>();
    c.bits = j.at("precision").get<long>();
    if (c.verdict == Verdict::cube_sum) {
        c.a = parse_rational(j.at("witness").at("a").get<std::string>());
        c.b = parse_rational(j.at("witness").at("b").get<std::string>());
        if (!verify_certificate(c))
            throw domain_error("stored witness fails a^3 + b^3 = 2n");
    }
    if (j.contains("L1")) {
        c.L1 = j.at("L1").get<std::string>();
        c.stability = j.at("stability").get<std::string>();
    }
    if (j.contains("diagnostics"))
        c.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return c;
}

} // namespace cubesum
