#include "horolab/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include "horolab/classifier.hpp"
#include "horolab/errors.hpp"
#include "horolab/expsum.hpp"
#include "horolab/quat.hpp"
#include "horolab/sieve.hpp"
#include "horolab/spnt.hpp"
#include "horolab/surface.hpp"

namespace horolab {

namespace {

std::ofstream open_artifact(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::path dir = cfg.get("out", "out");
    std::filesystem::create_directories(dir);
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write artifact " + (dir / name).string());
    // full parameter set minus the output path, so identical configs written
    // to different directories stay byte-identical
    f << "# " << cfg.oneline("out") << "\n";
    return f;
}

ClassifierParams classifier_params(const ExperimentConfig& cfg) {
    ClassifierParams p;
    p.A1 = cfg.get_num("A1", p.A1);
    p.A2 = cfg.get_num("A2", p.A2);
    p.A3 = cfg.get_num("A3", p.A3);
    p.A4 = cfg.get_num("A4", p.A4);
    p.A5 = cfg.get_num("A5", p.A5);
    p.A6 = cfg.get_num("A6", p.A6);
    p.kappa = cfg.get_num("kappa", p.kappa);
    p.delta = cfg.get_num("delta", p.delta);
    p.e1_threshold = cfg.get_num("e1_threshold", p.e1_threshold);
    p.seed = cfg.get_int("seed", p.seed);
    return p;
}

void run_spnt_average(const ExperimentConfig& cfg, std::ostream& log) {
    uint64_t N = cfg.get_int("N", 100000);
    int npoints = static_cast<int>(cfg.get_int("points", 3));
    int nfuncs = static_cast<int>(cfg.get_int("battery", 3));
    uint64_t seed = cfg.get_int("seed", 1);
    auto battery = test_battery(seed, nfuncs);
    auto csv = open_artifact(cfg, "spnt_average.csv");
    csv << "point,function,N,average\n";
    for (int pi = 0; pi < npoints; ++pi) {
        SurfacePoint x = generic_point(seed + pi);
        for (uint64_t scale : {N / 100, N / 10, N}) {
            if (scale < 4) continue;
            auto avgs = birkhoff_average_battery(x, battery, TimeSampler::semiprimes(scale));
            for (int fi = 0; fi < nfuncs; ++fi)
                csv << pi << ',' << fi << ',' << scale << ',' << fmt_double(avgs[fi]) << '\n';
        }
    }
    log << "spnt-average: wrote spnt_average.csv\n";
}

void run_bilinear(const ExperimentConfig& cfg, std::ostream& log) {
    uint64_t N = cfg.get_int("N", 20000);
    double epsilon = cfg.get_num("epsilon", 0.25);
    uint64_t sample_pairs = cfg.get_int("pairs", 32);
    uint64_t seed = cfg.get_int("seed", 1);
    SurfacePoint x = generic_point(seed);
    TestFunction f = test_battery(seed, 1)[0];
    PrimeWindow w = eligible_primes(epsilon, N);
    uint64_t limit = N * w.primes.back() + 1;
    BoundedSequence seq = dynamics_sequence(x, f, limit);
    CriterionReport rep = criterion_report(seq, epsilon, N, sample_pairs, seed);
    auto csv = open_artifact(cfg, "bilinear.csv");
    rep.to_csv(csv);
    log << "bilinear: max |S|/N = " << fmt_double(rep.max_bilinear_over_N) << "\n";
}

void run_trichotomy(const ExperimentConfig& cfg, std::ostream& log) {
    double T = cfg.get_num("T", 20000);
    uint64_t p = cfg.get_int("p", 11);
    uint64_t q = cfg.get_int("q", 13);
    uint64_t seed = cfg.get_int("seed", 1);
    SurfacePoint x = generic_point(seed);
    TrichotomyReport rep = classify_pair(x, p, q, T, classifier_params(cfg));
    auto txt = open_artifact(cfg, "trichotomy.txt");
    txt << rep.detail();
    log << "trichotomy: " << rep.summary() << "\n";
}

void run_shadowing(const ExperimentConfig& cfg, std::ostream& log) {
    double T = cfg.get_num("T", 10000);
    double R = cfg.get_num("R", 7);
    double s = cfg.get_num("s", 0.0);
    double offset = cfg.get_num("offset", std::pow(T, -1.5));
    uint64_t seed = cfg.get_int("seed", 1);
    ClassifierParams params = classifier_params(cfg);
    params.seed = seed;

    SurfacePoint w = make_periodic(R, s);
    SurfacePoint x = reduce(flow_v(offset) * w.rep);
    ShadowingDecomposition dec = shadowing_decomposition(x, w, R, T, params);
    auto csv = open_artifact(cfg, "shadow_blocks.csv");
    csv << "block_index,t_lo,t_hi,period,checked,ok,distance_max\n";
    for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
        const auto& bl = dec.blocks[i];
        csv << i << ',' << fmt_double(bl.t_lo) << ',' << fmt_double(bl.t_hi) << ','
            << fmt_double(bl.period) << ',' << bl.checked << ',' << bl.ok << ','
            << fmt_double(bl.max_checked_distance) << '\n';
    }

    TestFunction f = test_battery(seed, 1)[0];
    PeriodicExperimentReport rep = periodic_spnt_experiment(x, w, R, T, f, params);
    auto pcsv = open_artifact(cfg, "periodic_pipeline.csv");
    rep.to_csv(pcsv);
    log << "shadowing: " << dec.blocks.size() << " blocks, within-bound fraction "
        << fmt_double(dec.fraction_within_bound()) << "\n";
}

void run_expsum_bounds(const ExperimentConfig& cfg, std::ostream& log) {
    uint64_t models = cfg.get_int("models", 100);
    uint64_t seed = cfg.get_int("seed", 1);
    ExpsumParams eparams{cfg.get_num("T", 1e6), cfg.get_num("delta", 0.01),
                         cfg.get_num("A5", 1)};
    auto csv = open_artifact(cfg, "expsum_bounds.csv");
    csv << "kind,lo,len,mu,nu,beta,arc,magnitude,bound,ratio\n";
    // models are independent; rows are built per index and emitted in index
    // order, so the artifact does not depend on HOROLAB_THREADS
    std::vector<std::string> rows(models);
    parallel_blocks(models, [&](std::size_t m) {
        Rng rng(seed * 0x9e37 + m);
        double len = std::pow(10.0, rng.uniform(3.0, 5.0));
        double lo = rng.uniform(0.0, eparams.T - len);
        PhaseModel model;
        model.lo = lo;
        model.hi = lo + len;
        model.t0 = rng.uniform(0.0, lo);
        model.mu = 1 + rng.uniform(-1, 1) * std::pow(eparams.T, -1 + eparams.A5 * eparams.delta);
        bool minor = rng.below(2);
        double numax = 2 * std::pow(eparams.T, -1 + eparams.A5 * eparams.delta);
        model.nu = minor ? rng.uniform(0.5, 1.0) * numax
                         : rng.uniform(0.0, 0.5) * std::pow(eparams.T, 100 * eparams.A5 * eparams.delta) /
                               (len * len);
        model.beta = 1.0 / rng.uniform(3.0, 50.0);
        ArcClassification arc = classify_arc(model, eparams);

        PhaseSumReport sp = semiprime_phase_sum(model, 1, eparams);
        PhaseSumReport ip = integer_phase_sum(model, 1, eparams);
        DerivativeRange d2 = phase_derivative_range(model, 1, 2, eparams);
        double alpha2 = d2.min_abs > 0 ? d2.max_abs / d2.min_abs : 1e9;
        double bound2 = vdc2_bound(len, d2.min_abs, std::max(1.0, alpha2));
        std::string out;
        for (auto [kind, mag] : {std::pair<const char*, double>{"semiprime", std::abs(sp.sum)},
                                 {"integer", std::abs(ip.sum)}}) {
            out += kind;
            out += ',' + fmt_double(model.lo) + ',' + fmt_double(len) + ',' +
                   fmt_double(model.mu) + ',' + fmt_double(model.nu) + ',' +
                   fmt_double(model.beta) + ',';
            out += (arc.kind == ArcClassification::Kind::Minor ? 'm' : 'M');
            out += ',' + fmt_double(mag) + ',' + fmt_double(bound2) + ',' +
                   fmt_double(bound2 > 0 ? mag / bound2 : 0) + '\n';
        }
        rows[m] = std::move(out);
    });
    for (const std::string& row : rows) csv << row;
    log << "expsum-bounds: wrote expsum_bounds.csv\n";
}

void run_ap_counts(const ExperimentConfig& cfg, std::ostream& log) {
    uint64_t N = cfg.get_int("N", 1000000);
    uint64_t r = cfg.get_int("r", 3);
    ApTable t = semiprime_ap_table(0, N, r);
    auto csv = open_artifact(cfg, "ap_counts.csv");
    t.to_csv(csv);
    double worst = 0;
    for (const auto& row : t.rows)
        if (std::gcd(row.a, r) == 1) worst = std::max(worst, std::abs(row.deviation));
    log << "ap-counts: worst coprime deviation " << fmt_double(worst) << "\n";
}

void run_decay(const ExperimentConfig& cfg, std::ostream& log) {
    uint64_t seed = cfg.get_int("seed", 1);
    int npoints = static_cast<int>(cfg.get_int("points", 2));
    int nfuncs = static_cast<int>(cfg.get_int("battery", 2));
    double Tmax = cfg.get_num("T", 10000);
    std::vector<double> grid{Tmax / 100, Tmax / 10, Tmax};
    auto battery = test_battery(seed, nfuncs);
    auto csv = open_artifact(cfg, "decay.csv");
    csv << "point,function,T,discrepancy,cusp_excursion,fitted_exponent,ck_proxy\n";
    for (int pi = 0; pi < npoints; ++pi) {
        SurfacePoint x = generic_point(seed + pi);
        for (int fi = 0; fi < nfuncs; ++fi) {
            DecayReport rep = decay_experiment(x, battery[fi], grid);
            for (const auto& row : rep.rows)
                csv << pi << ',' << fi << ',' << fmt_double(row.T) << ','
                    << fmt_double(row.discrepancy) << ',' << fmt_double(row.cusp_excursion) << ','
                    << fmt_double(rep.fitted_exponent) << ',' << fmt_double(rep.ck_proxy) << '\n';
        }
    }
    log << "decay: wrote decay.csv\n";
}

void run_quaternion_certify(const ExperimentConfig& cfg, std::ostream& log) {
    int64_t a = static_cast<int64_t>(cfg.get_num("a", 2));
    int64_t b = static_cast<int64_t>(cfg.get_num("b", 3));
    uint64_t p = cfg.get_int("p", 2);
    uint64_t q = cfg.get_int("q", 3);
    uint64_t D = cfg.get_int("D", 50);
    QuatAlgebra alg(a, b);
    TraceObstructionCertificate cert = trace_obstruction(alg, p, q, D);
    auto txt = open_artifact(cfg, "certificate.txt");
    txt << cert.text();
    log << "quaternion-certify: " << (cert.has_solution ? "solution found" : "no solution") << "\n";
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"spnt-average",  "bilinear",  "trichotomy",
                                                "shadowing",     "expsum-bounds", "ap-counts",
                                                "decay",         "quaternion-certify"};
    return names;
}

void run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    std::string name = cfg.get("experiment");
    if (name == "spnt-average") return run_spnt_average(cfg, log);
    if (name == "bilinear") return run_bilinear(cfg, log);
    if (name == "trichotomy") return run_trichotomy(cfg, log);
    if (name == "shadowing") return run_shadowing(cfg, log);
    if (name == "expsum-bounds") return run_expsum_bounds(cfg, log);
    if (name == "ap-counts") return run_ap_counts(cfg, log);
    if (name == "decay") return run_decay(cfg, log);
    if (name == "quaternion-certify") return run_quaternion_certify(cfg, log);
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

} // namespace horolab
