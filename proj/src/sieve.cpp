#include "horolab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "horolab/errors.hpp"

namespace horolab {

namespace {
constexpr uint64_t kSieveCap = 10'000'000'000ULL;
constexpr uint64_t kCharCap = 100'000;
} // namespace

std::vector<uint64_t> primes_upto(uint64_t N) {
    if (N > kSieveCap) throw CapacityExceeded("primes_upto: N > 1e10");
    std::vector<uint64_t> primes;
    if (N < 2) return primes;

    uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(N))) + 1;
    while (root * root > N + 1) --root;

    std::vector<uint8_t> small(root + 1, 1);
    std::vector<uint64_t> base;
    for (uint64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(i);
        for (uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }

    primes.reserve(N > 10 ? static_cast<std::size_t>(1.2 * N / std::log((double)N)) : 8);
    const uint64_t segment = 1 << 18;
    std::vector<uint8_t> sieve(segment);
    for (uint64_t low = 2; low <= N; low += segment) {
        uint64_t high = std::min(low + segment - 1, N);
        std::fill(sieve.begin(), sieve.end(), 1);
        for (uint64_t p : base) {
            if (p * p > high) break;
            uint64_t start = std::max(p * p, (low + p - 1) / p * p);
            for (uint64_t j = start; j <= high; j += p) sieve[j - low] = 0;
        }
        for (uint64_t n = low; n <= high; ++n)
            if (sieve[n - low]) primes.push_back(n);
    }
    return primes;
}

SemiprimeStream semiprimes_upto(uint64_t N) {
    if (N < 4) throw std::invalid_argument("semiprimes_upto: N >= 4 required");
    if (N > kSieveCap) throw CapacityExceeded("semiprimes_upto: N > 1e10");
    SemiprimeStream s;
    s.limit = N;
    auto ps = primes_upto(N / 2);
    for (uint64_t p : ps) {
        for (uint64_t q : ps) {
            if (p * q > N) break;
            s.pairs.emplace_back(static_cast<uint32_t>(p), static_cast<uint32_t>(q));
        }
    }
    std::sort(s.pairs.begin(), s.pairs.end(),
              [](const auto& l, const auto& r) {
                  uint64_t pl = uint64_t(l.first) * l.second, pr = uint64_t(r.first) * r.second;
                  return pl != pr ? pl < pr : l.first < r.first;
              });
    return s;
}

void for_each_semiprime_pair(uint64_t lo, uint64_t hi,
                             const std::function<void(uint64_t, uint64_t, uint64_t)>& fn) {
    if (hi < 4 || hi < lo) return;
    if (hi > kSieveCap) throw CapacityExceeded("for_each_semiprime_pair: hi > 1e10");
    auto ps = primes_upto(hi / 2);
    for (uint64_t p : ps) {
        // restrict q to [lo / p, hi / p] up front
        uint64_t qmin = lo <= p ? 0 : (lo + p - 1) / p;
        auto it = std::lower_bound(ps.begin(), ps.end(), qmin);
        for (; it != ps.end(); ++it) {
            uint64_t pq = p * *it;
            if (pq > hi) break;
            if (pq >= lo) fn(p, *it, pq);
        }
    }
}

uint64_t pi2(uint64_t N) { return pi2_interval(0, N); }

uint64_t pi2_interval(uint64_t lo, uint64_t hi) {
    uint64_t n = 0;
    for_each_semiprime_pair(lo, hi, [&](uint64_t, uint64_t, uint64_t) { ++n; });
    return n;
}

uint64_t pi2_unordered(uint64_t N) {
    if (N < 4) return 0;
    auto ps = primes_upto(N / 2);
    uint64_t n = 0;
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i; j < ps.size(); ++j) {
            if (ps[i] * ps[j] > N) break;
            ++n;
        }
    return n;
}

std::vector<std::pair<uint64_t, uint32_t>> semiprime_products(uint64_t N) {
    std::vector<std::pair<uint64_t, uint32_t>> out;
    if (N < 4) return out;
    auto ps = primes_upto(N / 2);
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i; j < ps.size(); ++j) {
            uint64_t pq = ps[i] * ps[j];
            if (pq > N) break;
            out.emplace_back(pq, i == j ? 1u : 2u);
        }
    std::sort(out.begin(), out.end());
    return out;
}

int mobius(uint64_t n) {
    if (n == 0) throw std::invalid_argument("mobius(0)");
    int sign = 1;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

uint64_t euler_phi(uint64_t n) {
    uint64_t result = n;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

uint64_t divisor_count(uint64_t n) {
    uint64_t d = 1;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        uint64_t e = 0;
        while (n % p == 0) n /= p, ++e;
        d *= e + 1;
    }
    if (n > 1) d *= 2;
    return d;
}

std::vector<int8_t> mobius_upto(uint64_t N) {
    if (N > 100'000'000ULL) throw CapacityExceeded("mobius_upto: N > 1e8");
    std::vector<int8_t> mu(N + 1, 1);
    std::vector<uint8_t> sieved(N + 1, 0);
    std::vector<uint32_t> primes;
    if (N == 0) return mu;
    mu[0] = 0;
    for (uint64_t i = 2; i <= N; ++i) {
        if (!sieved[i]) {
            primes.push_back(static_cast<uint32_t>(i));
            mu[i] = -1;
        }
        for (uint32_t p : primes) {
            if (i * p > N) break;
            sieved[i * p] = 1;
            if (i % p == 0) {
                mu[i * p] = 0;
                break;
            }
            mu[i * p] = -mu[i];
        }
    }
    return mu;
}

ApTable semiprime_ap_table(uint64_t lo, uint64_t hi, uint64_t r) {
    if (r < 1) throw std::invalid_argument("semiprime_ap_table: r >= 1");
    ApTable t;
    t.lo = lo;
    t.hi = hi;
    t.r = r;
    std::vector<uint64_t> counts(r, 0);
    uint64_t total = 0;
    for_each_semiprime_pair(lo, hi, [&](uint64_t, uint64_t, uint64_t pq) {
        ++counts[pq % r];
        ++total;
    });
    t.pi2_J = total;
    t.pi2_coprime = 0;
    for (uint64_t a = 0; a < r; ++a)
        if (std::gcd(a, r) == 1) t.pi2_coprime += counts[a];
    double phi_r = static_cast<double>(euler_phi(r));
    for (uint64_t a = 0; a < r; ++a) {
        ApRow row;
        row.a = a;
        row.count = counts[a];
        bool coprime = std::gcd(a, r) == 1;
        row.main_term = coprime ? static_cast<double>(total) / phi_r : 0.0;
        if (coprime && row.main_term > 0)
            row.deviation = (static_cast<double>(row.count) - row.main_term) / row.main_term;
        else
            row.deviation = total ? static_cast<double>(row.count) / static_cast<double>(total) : 0.0;
        double cop_main = static_cast<double>(t.pi2_coprime) / phi_r;
        row.coprime_deviation =
            (coprime && cop_main > 0)
                ? (static_cast<double>(row.count) - cop_main) / cop_main
                : 0.0;
        t.rows.push_back(row);
    }
    return t;
}

void ApTable::to_csv(std::ostream& os) const {
    os << "r,a,count,main_term,deviation\n";
    for (const auto& row : rows)
        os << r << ',' << row.a << ',' << row.count << ',' << fmt_double(row.main_term) << ','
           << fmt_double(row.deviation) << '\n';
}

ApCount semiprime_count_ap(uint64_t lo, uint64_t hi, uint64_t r, uint64_t a) {
    auto t = semiprime_ap_table(lo, hi, r);
    const ApRow& row = t.rows.at(a % r);
    return {row.count, row.main_term, row.deviation};
}

namespace {

uint64_t pow_mod(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t acc = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) acc = acc * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return acc;
}

// Primitive root mod p^e for odd prime p.
uint64_t primitive_root(uint64_t pe, uint64_t p) {
    uint64_t phi = pe - pe / p;
    // factor phi
    std::vector<uint64_t> fac;
    uint64_t m = phi;
    for (uint64_t d = 2; d * d <= m; ++d) {
        if (m % d) continue;
        fac.push_back(d);
        while (m % d == 0) m /= d;
    }
    if (m > 1) fac.push_back(m);
    for (uint64_t g = 2; g < pe; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (uint64_t f : fac)
            if (pow_mod(g, phi / f, pe) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

// Chinese-remainder generator lifts: value g on one prime-power component and
// 1 on the others.
uint64_t crt_lift(uint64_t g, uint64_t pe, uint64_t r) {
    uint64_t m = r / pe;
    // solve x = g mod pe, x = 1 mod m
    for (uint64_t k = 0; k < pe; ++k) {
        uint64_t x = 1 + m * k;
        if (x % pe == g % pe) return x;
    }
    throw std::logic_error("crt_lift failed");
}

std::shared_ptr<const UnitGroupTable> unit_group_table(uint64_t r) {
    auto table = std::make_shared<UnitGroupTable>();
    table->r = static_cast<uint32_t>(r);
    table->coprime.resize(r, 0);
    for (uint64_t v = 0; v < r; ++v) table->coprime[v] = std::gcd(v, r) == 1;

    // factor r
    std::vector<std::pair<uint64_t, uint64_t>> pe_list;  // (p, p^e)
    uint64_t m = r;
    for (uint64_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        uint64_t pe = 1;
        while (m % p == 0) m /= p, pe *= p;
        pe_list.emplace_back(p, pe);
    }
    if (m > 1) pe_list.emplace_back(m, m);

    // cyclic generators per component
    std::vector<uint64_t> gens;
    std::vector<uint64_t> orders;
    for (auto [p, pe] : pe_list) {
        if (p == 2) {
            if (pe == 2) continue;  // trivial
            if (pe == 4) {
                gens.push_back(crt_lift(3, pe, r));
                orders.push_back(2);
            } else {
                gens.push_back(crt_lift(pe - 1, pe, r));  // -1
                orders.push_back(2);
                gens.push_back(crt_lift(5, pe, r));
                orders.push_back(pe / 4);
            }
        } else {
            gens.push_back(crt_lift(primitive_root(pe, p), pe, r));
            orders.push_back(pe - pe / p);
        }
    }

    // discrete logs: walk the full group as nested cycles
    std::size_t k = gens.size();
    table->orders.assign(orders.begin(), orders.end());
    table->logs.assign(k, std::vector<uint32_t>(r, 0));
    std::vector<uint32_t> exps(k, 0);
    uint64_t total = 1;
    for (uint64_t o : orders) total *= o;
    uint64_t v = 1 % r;
    for (uint64_t step = 0; step < total; ++step) {
        for (std::size_t i = 0; i < k; ++i) table->logs[i][v] = exps[i];
        // increment odometer and value
        for (std::size_t i = 0; i < k; ++i) {
            v = v * gens[i] % r;
            if (++exps[i] < orders[i]) break;
            exps[i] = 0;
            // wrapped component: multiply gens[i]^{orders[i]} == 1, value already wrapped
        }
    }
    return table;
}

} // namespace

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroupTable> table,
                                       std::vector<uint32_t> exps)
    : table_(std::move(table)), exps_(std::move(exps)) {
    order_ = 1;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        uint32_t m = table_->orders[i];
        uint32_t e = exps_[i];
        uint32_t comp_order = m / std::gcd(e, m);
        order_ = std::lcm(order_, comp_order);
    }
}

cplx DirichletCharacter::operator()(uint64_t v) const {
    uint64_t r = table_->r;
    v %= r;
    if (r == 1) return {1.0, 0.0};
    if (!table_->coprime[v]) return {0.0, 0.0};
    long double arg = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        arg += static_cast<long double>(exps_[i]) * table_->logs[i][v] / table_->orders[i];
    return e_of(static_cast<double>(arg));
}

std::vector<DirichletCharacter> characters_mod(uint64_t r) {
    if (r < 1) throw std::invalid_argument("characters_mod: r >= 1");
    if (r > kCharCap) throw CapacityExceeded("characters_mod: r > 1e5");
    auto table = unit_group_table(r);
    std::vector<DirichletCharacter> out;
    std::size_t k = table->orders.size();
    std::vector<uint32_t> exps(k, 0);
    uint64_t total = 1;
    for (uint32_t o : table->orders) total *= o;
    for (uint64_t i = 0; i < total; ++i) {
        out.emplace_back(table, exps);
        for (std::size_t j = 0; j < k; ++j) {
            if (++exps[j] < table->orders[j]) break;
            exps[j] = 0;
        }
    }
    return out;
}

CoprimeCount coprime_interval_count(uint64_t lo, uint64_t hi, uint64_t r) {
    if (r < 1 || hi < lo) throw std::invalid_argument("coprime_interval_count: bad input");
    // Mobius over divisors of r: exact.
    uint64_t count = 0;
    std::vector<std::pair<uint64_t, int>> divisors;
    for (uint64_t d = 1; d * d <= r; ++d) {
        if (r % d) continue;
        divisors.emplace_back(d, mobius(d));
        if (d != r / d) divisors.emplace_back(r / d, mobius(r / d));
    }
    int64_t acc = 0;
    for (auto [d, mu] : divisors) {
        if (!mu) continue;
        uint64_t upper = hi / d;
        uint64_t lower = lo == 0 ? 0 : (lo - 1) / d;
        acc += static_cast<int64_t>(mu) * static_cast<int64_t>(upper - lower);
    }
    count = static_cast<uint64_t>(acc);
    double len = static_cast<double>(hi - lo + 1);
    return {count, static_cast<double>(euler_phi(r)) * len / static_cast<double>(r),
            divisor_count(r)};
}

CharacterSum character_interval_sum(const DirichletCharacter& chi, uint64_t lo, uint64_t hi) {
    if (chi.is_principal())
        throw std::invalid_argument("character_interval_sum: principal character has no PV bound");
    if (hi < lo) throw std::invalid_argument("character_interval_sum: empty interval");
    cplx sum = pairwise_sum_fn<cplx>(lo, hi + 1, [&](uint64_t v) { return chi(v); });
    double r = chi.modulus();
    return {sum, std::sqrt(r) * std::log(r)};
}

} // namespace horolab
