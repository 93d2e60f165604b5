#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <utility>
#include <vector>

#include "horolab/util.hpp"

namespace horolab {

// All primes <= N by a segmented sieve.  Capacity guard at N > 1e10.
std::vector<uint64_t> primes_upto(uint64_t N);

// Ordered prime pairs (p, q) with p*q <= N, emitted in increasing product and
// then increasing p.  count() == pi_2(N) with the ordered convention (p = q
// allowed once), which is the convention every double sum in the library
// uses.  An unordered/distinct diagnostic count is provided separately.
struct SemiprimeStream {
    uint64_t limit = 0;
    std::vector<std::pair<uint32_t, uint32_t>> pairs;

    uint64_t count() const { return pairs.size(); }
};

SemiprimeStream semiprimes_upto(uint64_t N);

// pi_2(N) without materializing the stream.
uint64_t pi2(uint64_t N);
// Ordered pairs with lo <= p*q <= hi.
uint64_t pi2_interval(uint64_t lo, uint64_t hi);
// Unordered (distinct products counted by set, p <= q) diagnostic count.
uint64_t pi2_unordered(uint64_t N);

// Distinct semiprime values s <= N with their ordered-pair multiplicity
// (2 when s = p*q with p != q, 1 when s = p^2), sorted by s.
std::vector<std::pair<uint64_t, uint32_t>> semiprime_products(uint64_t N);

// Visits every ordered pair (p, q) with lo <= p*q <= hi.
void for_each_semiprime_pair(uint64_t lo, uint64_t hi,
                             const std::function<void(uint64_t p, uint64_t q, uint64_t pq)>& fn);

// Multiplicative basics.
int mobius(uint64_t n);
uint64_t euler_phi(uint64_t n);
uint64_t divisor_count(uint64_t n);
// mu(1..N) as a vector (index 0 unused).
std::vector<int8_t> mobius_upto(uint64_t N);

// Counts of semiprimes in an arithmetic progression over an interval,
// against the main term pi_2(J)/phi(r).
struct ApRow {
    uint64_t a;
    uint64_t count;
    double main_term;
    double deviation;  // (count - main) / main when (a, r) = 1, else count / pi_2(J)
    // deviation from the coprime-normalized main term
    // #\{pq in J : (pq, r) = 1\} / phi(r): the equidistribution content once the
    // elementary p | r mass is accounted for (at desk scale that mass is
    // O(1/loglog), not o(1); see the deviation column)
    double coprime_deviation;
};

struct ApTable {
    uint64_t lo, hi, r;
    uint64_t pi2_J;
    uint64_t pi2_coprime;  // ordered pairs in J with (pq, r) = 1
    std::vector<ApRow> rows;  // one per residue a in [0, r)

    void to_csv(std::ostream& os) const;
};

ApTable semiprime_ap_table(uint64_t lo, uint64_t hi, uint64_t r);

// Single-residue form.
struct ApCount {
    uint64_t count;
    double main_term;
    double deviation;
};
ApCount semiprime_count_ap(uint64_t lo, uint64_t hi, uint64_t r, uint64_t a);

// Discrete-log tables for (Z/r)^*, shared by all characters mod r.
struct UnitGroupTable {
    uint32_t r = 1;
    std::vector<uint32_t> orders;              // cyclic factor orders m_k
    std::vector<std::vector<uint32_t>> logs;   // logs[k][v] for coprime v, undefined otherwise
    std::vector<uint8_t> coprime;              // gcd(v, r) == 1
};

class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const UnitGroupTable> table, std::vector<uint32_t> exps);

    cplx operator()(uint64_t v) const;
    uint32_t modulus() const { return table_->r; }
    bool is_principal() const { return order_ == 1; }
    bool is_real() const { return order_ <= 2; }
    bool is_quadratic() const { return order_ == 2; }
    uint32_t order() const { return order_; }
    const std::vector<uint32_t>& exponents() const { return exps_; }

private:
    std::shared_ptr<const UnitGroupTable> table_;
    std::vector<uint32_t> exps_;
    uint32_t order_ = 1;
};

// All phi(r) characters mod r, ordered by exponent tuple.  Capacity guard at
// r > 1e5.
std::vector<DirichletCharacter> characters_mod(uint64_t r);

// #\{v in [lo, hi] : (v, r) = 1\} with main term phi(r)|I|/r; the exact error
// is bounded by d(r).
struct CoprimeCount {
    uint64_t count;
    double main_term;
    uint64_t divisor_bound;
};
CoprimeCount coprime_interval_count(uint64_t lo, uint64_t hi, uint64_t r);

// Sum of chi over an integer interval plus the Polya-Vinogradov budget
// sqrt(r) log r.  Throws std::invalid_argument for the principal character.
struct CharacterSum {
    cplx sum;
    double pv_bound;
};
CharacterSum character_interval_sum(const DirichletCharacter& chi, uint64_t lo, uint64_t hi);

} // namespace horolab
