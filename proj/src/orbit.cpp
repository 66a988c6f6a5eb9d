#include "qspec/orbit.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace qspec {

namespace {

using i64 = long;
using i128 = __int128;

i128 floor_mod(i128 x, i128 m) {
    i128 r = x % m;
    return r < 0 ? r + m : r;
}

i64 to_i64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw BudgetExceeded("value exceeds 64-bit kernel range");
    return z.get_si();
}

// Double position of the first root; every path uses this so cached and fresh runs agree bit for bit.
double root_position(i64 a, i64 b, double sqrtD) { return (-static_cast<double>(b) + sqrtD) / (2.0 * a); }

i64 gcd64(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

struct Triple {
    i64 a, b, c;
    bool operator==(const Triple& o) const { return a == o.a && b == o.b && c == o.c; }
};

struct TripleHash {
    size_t operator()(const Triple& t) const {
        uint64_t h = static_cast<uint64_t>(t.a) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<uint64_t>(t.b) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        h ^= static_cast<uint64_t>(t.c) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Reduction of an indefinite form in 128-bit arithmetic; mirrors form_reduce.
Triple reduce128(i128 a, i128 b, i128 D, i128 s) {
    auto normalize = [&](i128 aa, i128 bb) {
        i128 A = aa < 0 ? -aa : aa, twoA = 2 * A, bp;
        if (A > s) {
            bp = floor_mod(bb, twoA);
            if (bp > A) bp -= twoA;
        } else {
            bp = s - floor_mod(s - bb, twoA);
        }
        return bp;
    };
    auto reduced = [&](i128 aa, i128 bb) {
        i128 A2 = 2 * (aa < 0 ? -aa : aa);
        return bb > 0 && bb <= s && A2 - bb <= s && bb + A2 >= s + 1;
    };
    b = normalize(a, b);
    i128 c = (b * b - D) / (4 * a);
    int guard = 0;
    while (!reduced(a, b)) {
        i128 na = c;
        b = normalize(na, -b);
        a = na;
        c = (b * b - D) / (4 * a);
        if (++guard > 1'000'000) throw std::logic_error("128-bit reduction failed to terminate");
    }
    return {static_cast<i64>(a), static_cast<i64>(b), static_cast<i64>(c)};
}

// ------------------------------------------------------ square roots mod n

i64 powmod(i64 base, i64 e, i64 m) {
    i128 r = 1, b = floor_mod(base, m);
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return static_cast<i64>(r);
}

// Tonelli-Shanks for an odd prime p with n a nonzero square mod p.
std::optional<i64> sqrt_mod_prime(i64 n, i64 p) {
    n = static_cast<i64>(floor_mod(n, p));
    if (powmod(n, (p - 1) / 2, p) != 1) return std::nullopt;
    if (p % 4 == 3) return powmod(n, (p + 1) / 4, p);
    i64 q = p - 1, s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    i64 m = s, c = powmod(z, q, p), t = powmod(n, q, p), r = powmod(n, (q + 1) / 2, p);
    while (t != 1) {
        i64 i = 0, tt = t;
        while (tt != 1) {
            tt = static_cast<i64>(static_cast<i128>(tt) * tt % p);
            ++i;
        }
        i64 b = c;
        for (i64 j = 0; j < m - i - 1; ++j) b = static_cast<i64>(static_cast<i128>(b) * b % p);
        m = i;
        c = static_cast<i64>(static_cast<i128>(b) * b % p);
        t = static_cast<i64>(static_cast<i128>(t) * c % p);
        r = static_cast<i64>(static_cast<i128>(r) * b % p);
    }
    return r;
}

i64 inv_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = static_cast<i64>(floor_mod(a, m));
    while (a1 != 0) {
        i64 q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    return static_cast<i64>(floor_mod(x, m));
}

// All r in [0, p^k) with r^2 = D mod p^k.
std::vector<i64> sqrt_mod_prime_power(i128 D, i64 p, int k) {
    std::vector<i64> roots;
    i64 pk = 1;
    for (int j = 0; j < k; ++j) pk *= p;
    if (p != 2 && floor_mod(D, p) != 0) {
        auto r0 = sqrt_mod_prime(static_cast<i64>(floor_mod(D, p)), p);
        if (!r0) return roots;
        i64 r = *r0, q = p;
        for (int j = 1; j < k; ++j) {
            q *= p;
            i128 f = floor_mod(static_cast<i128>(r) * r - D, q);
            r = static_cast<i64>(floor_mod(r - f * inv_mod(2 * r, q), q));
        }
        roots = {r, static_cast<i64>(floor_mod(-static_cast<i128>(r), pk))};
        if (roots[0] == roots[1]) roots.pop_back();
        return roots;
    }
    // p = 2 or p | D: lift every root digit by digit
    for (i64 t = 0; t < p; ++t)
        if (floor_mod(static_cast<i128>(t) * t - D, p) == 0) roots.push_back(t);
    i64 q = p;
    for (int j = 1; j < k && !roots.empty(); ++j) {
        i64 nq = q * p;
        std::vector<i64> next;
        for (i64 r : roots)
            for (i64 t = 0; t < p; ++t) {
                i64 cand = r + t * q;
                if (floor_mod(static_cast<i128>(cand) * cand - D, nq) == 0) next.push_back(cand);
            }
        roots.swap(next);
        q = nq;
    }
    return roots;
}

std::vector<int> smallest_prime_factors(i64 n) {
    std::vector<int> spf(static_cast<size_t>(n + 1), 0);
    for (i64 i = 2; i <= n; ++i) {
        if (spf[i] != 0) continue;
        for (i64 j = i; j <= n; j += i)
            if (spf[j] == 0) spf[j] = static_cast<int>(i);
    }
    return spf;
}

// All b mod 4m with b^2 = D mod 4m.
std::vector<i64> sqrt_mod_4m(i128 D, i64 m, const std::vector<int>& spf) {
    std::vector<std::pair<i64, int>> fac;
    int e2 = 2;
    i64 rest = m;
    while (rest % 2 == 0) {
        rest /= 2;
        ++e2;
    }
    fac.push_back({2, e2});
    while (rest > 1) {
        i64 p = spf[static_cast<size_t>(rest)];
        int k = 0;
        while (rest % p == 0) {
            rest /= p;
            ++k;
        }
        fac.push_back({p, k});
    }
    std::vector<i64> acc{0};
    i64 M = 1;
    for (auto [p, k] : fac) {
        std::vector<i64> rs = sqrt_mod_prime_power(D, p, k);
        if (rs.empty()) return {};
        i64 pk = 1;
        for (int j = 0; j < k; ++j) pk *= p;
        i64 inv = inv_mod(M % pk, pk);
        std::vector<i64> next;
        next.reserve(acc.size() * rs.size());
        for (i64 r1 : acc)
            for (i64 r2 : rs) {
                i128 t = floor_mod(static_cast<i128>(r2 - r1) % pk * inv, pk);
                next.push_back(static_cast<i64>(r1 + M * t));
            }
        acc.swap(next);
        M *= pk;
    }
    return acc;
}

// ------------------------------------------------------------- targets

enum Tag : int { kAlpha = 1, kSigma = 2, kReflAlpha = 4, kReflSigma = 8 };

struct Setup {
    QuadSurd alpha0;
    BQForm f0;
    mpz_class D;
    mpz_class sqrt_part, core;  // sqrt D = sqrt_part * sqrt(core)
    mpz_class s;                // floor sqrt D
    i64 a_max = 0;
    std::unordered_map<Triple, int, TripleHash> targets;
    std::map<int, BQForm> base_forms;
    std::map<BQForm, int> target_tags_mpz;  // same data for the reference scan
};

Setup make_setup(const QuadSurd& alpha0, const GroupSpec& group, double h_max, long a_budget) {
    alpha0.require_irrational("enumerate_orbit_window");
    if (!alpha0.is_real() || alpha0.m() != 0) throw DomainError("orbit enumeration needs a real quadratic irrational");
    if (!(h_max > 0.0) || !std::isfinite(h_max)) throw DomainError("h_max must be a positive real");
    Setup st;
    st.alpha0 = alpha0;
    st.f0 = BQForm::of(alpha0);
    st.D = st.f0.disc();
    auto [sq, core] = squarefree_split(st.D);
    st.sqrt_part = sq;
    st.core = core;
    mpz_sqrt(st.s.get_mpz_t(), st.D.get_mpz_t());
    // |a| <= h_max sqrt(D) / 2  <=>  a^2 <= floor(h_max^2 D / 4)
    mpq_class hq(h_max);
    mpq_class bound = hq * hq * mpq_class(st.D) / 4;
    mpz_class fl = bound.get_num() / bound.get_den(), amax;
    mpz_sqrt(amax.get_mpz_t(), fl.get_mpz_t());
    if (amax > a_budget)
        throw BudgetExceeded("orbit scan needs |a| up to " + amax.get_str() + ", budget is " +
                             std::to_string(a_budget));
    st.a_max = amax.get_si();
    st.base_forms[kAlpha] = st.f0;
    st.base_forms[kSigma] = st.f0.negated();
    if (group.kind == GroupKind::pgl2z) {
        st.base_forms[kReflAlpha] = BQForm::of(-alpha0);
        st.base_forms[kReflSigma] = BQForm::of(-alpha0.galois());
    }
    for (const auto& [tag, f] : st.base_forms) {
        FormCycle cyc = form_reduce_cycle(f);
        for (const BQForm& g : cyc.forms) {
            st.targets[Triple{to_i64(g.a), to_i64(g.b), to_i64(g.c)}] |= tag;
            st.target_tags_mpz[g] |= tag;
        }
    }
    return st;
}

struct Cand {
    i64 a, b, c;
    int tag;
    double x;
};

MoebiusMap reflection() { return MoebiusMap(BaseScalar(-1), BaseScalar(0), BaseScalar(0), BaseScalar(1), true); }

QuadSurd root_of(const Setup& st, const BQForm& f) {
    mpq_class u{mpz_class(-f.b), mpz_class(2 * f.a)}, v{st.sqrt_part, mpz_class(2 * f.a)};
    u.canonicalize();
    v.canonicalize();
    return QuadSurd::from_canonical(BaseScalar(u), BaseScalar(v), st.core);
}

// Turns candidate forms into orbit elements; applies the finite-index filter and builds witnesses.
std::vector<OrbitElement> materialize(const Setup& st, const GroupSpec& group, std::vector<Cand> cands,
                                      bool witnesses) {
    std::vector<OrbitElement> out;
    out.reserve(cands.size());
    std::optional<MoebiusMap> g0;
    if (group.kind == GroupKind::finite_index) {
        if (!group.member || group.index <= 0)
            throw DomainError("finite-index group needs a membership predicate and a positive index");
        g0 = automorph_of(st.alpha0);
    }
    const QuadSurd alpha_sigma = st.alpha0.galois();
    for (const Cand& cd : cands) {
        BQForm f(cd.a, cd.b, cd.c);
        OrbitElement e;
        e.form = f;
        e.value = root_of(st, f);
        e.sigma = e.value.galois();
        e.h.h_squared = mpq_class(mpz_class(4 * f.a * f.a), st.D);
        e.h.h_squared.canonicalize();
        e.h.value = 2.0 * std::abs(static_cast<double>(cd.a)) / std::sqrt(st.D.get_d());
        e.x = cd.x;
        e.from_sigma = !(cd.tag & (kAlpha | kReflAlpha));
        bool keep = true;
        if (group.kind == GroupKind::finite_index) {
            keep = false;
            for (int tag : {kAlpha, kSigma}) {
                if (!(cd.tag & tag) || keep) continue;
                auto M = form_transporter(st.base_forms.at(tag), f);
                if (!M) throw std::logic_error("class lookup and transporter disagree");
                MoebiusMap w = *M;
                for (int k = 0; k < group.index; ++k) {
                    if (group.member(w)) {
                        keep = true;
                        e.from_sigma = tag == kSigma;
                        e.witness = w;
                        break;
                    }
                    w = w * *g0;
                }
            }
        } else if (witnesses) {
            int tag = (cd.tag & kAlpha) ? kAlpha : (cd.tag & kSigma) ? kSigma : (cd.tag & kReflAlpha) ? kReflAlpha : kReflSigma;
            auto M = form_transporter(st.base_forms.at(tag), f);
            if (!M) throw std::logic_error("class lookup and transporter disagree");
            e.witness = (tag == kReflAlpha || tag == kReflSigma) ? *M * reflection() : *M;
            e.from_sigma = tag == kSigma || tag == kReflSigma;
        }
        if (!keep) continue;
        if (e.witness) {
            const QuadSurd& src = e.from_sigma ? alpha_sigma : st.alpha0;
            if (e.witness->apply(src) != e.value) throw std::logic_error("orbit witness does not reproduce the element");
        }
        out.push_back(std::move(e));
    }
    return out;
}

void sort_elements(std::vector<Cand>& cands) {
    std::sort(cands.begin(), cands.end(), [](const Cand& p, const Cand& q) {
        i64 ap = p.a < 0 ? -p.a : p.a, aq = q.a < 0 ? -q.a : q.a;
        if (ap != aq) return ap < aq;
        if (p.x != q.x) return p.x < q.x;
        if (p.a != q.a) return p.a < q.a;
        return p.b < q.b;
    });
}

}  // namespace

// ------------------------------------------------------------- GroupSpec

GroupSpec GroupSpec::finite_index(std::function<bool(const MoebiusMap&)> member, std::vector<MoebiusMap> generators,
                                  int index) {
    GroupSpec g;
    g.kind = GroupKind::finite_index;
    g.member = std::move(member);
    g.generators = std::move(generators);
    g.index = index;
    return g;
}

GroupSpec GroupSpec::gamma0(long N) {
    if (N < 1) throw DomainError("Gamma0 level must be positive");
    long idx = N, n = N;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        idx = idx / p * (p + 1);
    }
    if (n > 1) idx = idx / n * (n + 1);
    auto member = [N](const MoebiusMap& M) {
        if (!M.c.is_rational() || M.c.re.get_den() != 1) return false;
        return mpz_divisible_ui_p(M.c.re.get_num_mpz_t(), static_cast<unsigned long>(N)) != 0;
    };
    std::vector<MoebiusMap> gens{MoebiusMap::T(), MoebiusMap(1, 0, N, 1)};
    return finite_index(member, gens, static_cast<int>(idx));
}

// ---------------------------------------------------------------- Window

Window Window::of(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi)) throw DomainError("window must satisfy lo <= hi");
    return {mpq_class(lo), mpq_class(hi)};
}

bool Window::contains(const QuadSurd& x) const {
    QuadSurd L{BaseScalar(lo)}, H{BaseScalar(hi)};
    return compare(x, L) >= 0 && compare(x, H) <= 0;
}

// ----------------------------------------------------------- enumeration

std::vector<OrbitElement> enumerate_orbit_window(const QuadSurd& alpha0, const GroupSpec& group, double h_max,
                                                 const Window& window, const OrbitOptions& opts) {
    if (window.lo > window.hi) throw DomainError("empty window");
    Setup st = make_setup(alpha0, group, h_max, opts.a_budget);
    const i128 D = static_cast<i128>(to_i64(st.D));
    const i128 s = static_cast<i128>(to_i64(st.s));
    const double sqrtD = std::sqrt(st.D.get_d());
    const double lo = window.lo.get_d(), hi = window.hi.get_d();
    if (std::abs(lo) > 1e12 || std::abs(hi) > 1e12) throw BudgetExceeded("window too large for the 64-bit kernel");
    const std::vector<int> spf = smallest_prime_factors(std::max<i64>(st.a_max, 2));
    const i64 amax = st.a_max;

    int nthreads = opts.parallel ? (opts.threads > 0 ? opts.threads : omp_get_max_threads()) : 1;
    std::vector<std::vector<Cand>> shards(static_cast<size_t>(nthreads));

#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 64)
    for (i64 m = 1; m <= amax; ++m) {
        auto& mine = shards[static_cast<size_t>(omp_get_thread_num())];
        const std::vector<i64> res = sqrt_mod_4m(D, m, spf);
        if (res.empty()) continue;
        const i64 n = 4 * m;
        for (int sign : {1, -1}) {
            const i64 a = sign * m;
            double e1 = sqrtD - 2.0 * a * hi, e2 = sqrtD - 2.0 * a * lo;
            i64 bmin = static_cast<i64>(std::floor(std::min(e1, e2))) - 2;
            i64 bmax = static_cast<i64>(std::ceil(std::max(e1, e2))) + 2;
            for (i64 r : res) {
                i64 b0 = bmin + static_cast<i64>(floor_mod(static_cast<i128>(r) - bmin, n));
                for (i64 b = b0; b <= bmax; b += n) {
                    i128 cc = (static_cast<i128>(b) * b - D) / (4 * static_cast<i128>(a));
                    i64 c = static_cast<i64>(cc);
                    if (gcd64(gcd64(a, b), c) != 1) continue;
                    double x = root_position(a, b, sqrtD);
                    double tol = 1e-9 * std::max(1.0, std::abs(x));
                    if (x < lo - tol || x > hi + tol) continue;
                    auto it = st.targets.find(reduce128(a, b, D, s));
                    if (it == st.targets.end()) continue;
                    const int tag = it->second;
                    if (x < lo + tol || x > hi - tol) {
                        // near the window edge: decide exactly
                        QuadSurd xv = root_of(st, BQForm(a, b, c));
                        if (!window.contains(xv)) continue;
                    }
                    mine.push_back({a, b, c, tag, x});
                }
            }
        }
    }
    std::vector<Cand> all;
    for (auto& sh : shards) all.insert(all.end(), sh.begin(), sh.end());
    sort_elements(all);
    return materialize(st, group, std::move(all), opts.witnesses || group.kind == GroupKind::finite_index);
}

std::vector<OrbitElement> enumerate_orbit_window_reference(const QuadSurd& alpha0, const GroupSpec& group,
                                                           double h_max, const Window& window) {
    Setup st = make_setup(alpha0, group, h_max, 1'000'000);
    const double sqrtD = std::sqrt(st.D.get_d());
    std::vector<Cand> all;
    for (i64 m = 1; m <= st.a_max; ++m) {
        for (int sign : {1, -1}) {
            mpz_class a = sign * m;
            double e1 = sqrtD - 2.0 * sign * m * window.hi.get_d(), e2 = sqrtD - 2.0 * sign * m * window.lo.get_d();
            mpz_class bmin = static_cast<long>(std::floor(std::min(e1, e2))) - 2;
            mpz_class bmax = static_cast<long>(std::ceil(std::max(e1, e2))) + 2;
            for (mpz_class b = bmin; b <= bmax; ++b) {
                mpz_class num = b * b - st.D;
                if (!mpz_divisible_p(num.get_mpz_t(), mpz_class(4 * a).get_mpz_t())) continue;
                BQForm f(a, b, num / (4 * a));
                if (!f.is_primitive()) continue;
                QuadSurd x = f.first_root();
                if (!window.contains(x)) continue;
                auto it = st.target_tags_mpz.find(form_reduce(f).reduced);
                if (it == st.target_tags_mpz.end()) continue;
                all.push_back({to_i64(f.a), to_i64(f.b), to_i64(f.c), it->second,
                                root_position(to_i64(f.a), to_i64(f.b), sqrtD)});
            }
        }
    }
    sort_elements(all);
    return materialize(st, group, std::move(all), true);
}

Depth depth_D(const OrbitElement& r) {
    double D = std::log(r.h.value);
    return {D, D <= 0.0};
}

// ------------------------------------------------------ hyperbolic points

std::vector<QuadSurd> enumerate_hyperbolic_points(const GroupSpec& group, const FormCycle& excluded,
                                                  long trace_budget) {
    std::set<mpz_class> discs;
    for (long t = 3; t <= trace_budget; ++t) {
        mpz_class T = mpz_class(t) * t - 4;
        for (mpz_class u = 1; u * u <= T; ++u) {
            mpz_class u2 = u * u;
            if (!mpz_divisible_p(T.get_mpz_t(), u2.get_mpz_t())) continue;
            mpz_class Dp = T / u2;
            mpz_class r4 = Dp % 4;
            if ((r4 == 0 || r4 == 1) && !mpz_perfect_square_p(Dp.get_mpz_t())) discs.insert(Dp);
        }
    }
    auto variants = [&](const BQForm& f) {
        std::vector<BQForm> v{f, f.negated()};
        if (group.kind == GroupKind::pgl2z) {
            v.push_back(BQForm(-f.a, f.b, -f.c));
            v.push_back(BQForm(f.a, -f.b, f.c));
        }
        return v;
    };
    auto class_id = [&](const BQForm& f) {
        BQForm best;
        bool first = true;
        for (const BQForm& g : variants(f)) {
            BQForm k = form_reduce_cycle(g).key();
            if (first || k < best) best = k;
            first = false;
        }
        return best;
    };
    std::set<BQForm> skip;
    if (!excluded.forms.empty()) skip.insert(class_id(excluded.key()));
    std::vector<QuadSurd> out;
    for (const mpz_class& D : discs) {
        mpz_class s;
        mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());
        std::set<BQForm> seen_ids;
        for (mpz_class b = 1; b <= s; ++b) {
            mpz_class num = b * b - D;
            if (!mpz_divisible_ui_p(num.get_mpz_t(), 4)) continue;
            mpz_class ac = num / 4;  // negative
            mpz_class absac = -ac;
            for (mpz_class a = 1; a <= absac && 2 * a - b <= s; ++a) {
                if (!mpz_divisible_p(absac.get_mpz_t(), a.get_mpz_t())) continue;
                for (int sign : {1, -1}) {
                    mpz_class aa = sign * a;
                    BQForm f(aa, b, ac / aa);
                    if (!f.is_primitive() || !form_is_reduced(f)) continue;
                    BQForm id = class_id(f);
                    if (skip.count(id) || !seen_ids.insert(id).second) continue;
                    QuadSurd x = id.first_root();
                    Classification c = classify(automorph_of(x));
                    if (c.kind != MapKind::hyperbolic || !c.fixed_points ||
                        (c.fixed_points->first != x && c.fixed_points->second != x))
                        throw std::logic_error("hyperbolic point certification failed");
                    out.push_back(x);
                }
            }
        }
    }
    return out;
}

// --------------------------------------------------------------- cache

void write_orbit_cache(const std::string& path, const std::vector<OrbitElement>& elems,
                       const std::vector<std::string>& header) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write orbit cache " + path);
    for (const auto& h : header) os << "# " << h << "\n";
    char buf[64];
    for (const auto& e : elems) {
        std::snprintf(buf, sizeof buf, "%.17g", e.h.value);
        os << buf << "\t" << e.value.str() << "\t" << e.form.str() << "\n";
    }
}

std::vector<OrbitElement> read_orbit_cache(const std::string& path, std::vector<std::string>* header) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read orbit cache " + path);
    std::vector<OrbitElement> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (header) header->push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        std::istringstream ls(line);
        std::string hs, vs, fs;
        if (!std::getline(ls, hs, '\t') || !std::getline(ls, vs, '\t') || !std::getline(ls, fs))
            throw ParseError("malformed orbit cache line: " + line);
        OrbitElement e;
        e.value = parse_surd(vs);
        long a, b, c;
        if (std::sscanf(fs.c_str(), "(%ld,%ld,%ld)", &a, &b, &c) != 3)
            throw ParseError("malformed form in orbit cache: " + fs);
        e.form = BQForm(a, b, c);
        if (e.form.first_root() != e.value) throw ParseError("orbit cache value is not the first root of its form");
        e.sigma = e.value.galois();
        const mpz_class D = e.form.disc();
        e.h.h_squared = mpq_class(mpz_class(4 * a * a), D);
        e.h.h_squared.canonicalize();
        e.h.value = 2.0 * std::abs(static_cast<double>(a)) / std::sqrt(D.get_d());
        e.x = root_position(a, b, std::sqrt(D.get_d()));
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace qspec
