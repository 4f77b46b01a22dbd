// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "zdsi/zdsi.hpp"

using namespace zdsi;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream note;

    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) note << "failed: " << what << "; ";
        ok = ok && cond;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

DistortionMatrix hamming_of(const JointPMF& p) { return DistortionMatrix::hamming(p.source()); }

// 1. Pentagon optimum.
void pentagon_optimum(Outcome& o)
{
    auto t0 = Clock::now();
    auto pmf = typewriter(5);
    auto sol = solve_ri(pmf);
    double dt = seconds_since(t0);
    auto colors = coloring_of_protocol(sol.protocol, build_characteristic_graph(pmf));
    o.require(sol.length == Rational(7, 5), "L_Y = " + sol.length.str());
    o.require(colors.count == 4, "coloring uses " + std::to_string(colors.count) + " colors");
    o.require(dt < 1.0, "runtime");
    o.note << "L_Y = " << sol.length << ", colors = " << colors.count << ", " << dt << " s";
}

// 2. Best zero-distortion 3-cell partition of the pentagon.
void pentagon_coloring_baseline(Outcome& o)
{
    auto pmf = typewriter(5);
    auto d = hamming_of(pmf);
    auto px = marginal_source(pmf);
    std::optional<Rational> best;
    std::size_t colorings = 0;
    for (const auto& f : all_partitions(5)) {
        if (f.cell_count() != 3) continue;
        auto q = evaluate_partition(pmf, d, f);
        if (!q.distortion.is_zero()) continue;
        ++colorings;
        o.require(is_complete(induced_graph(pmf, f)), "induced graph of " + f.describe(pmf.source()) + " is complete");
        std::vector<Rational> mass(3);
        for (std::size_t x = 0; x < 5; ++x) mass[f.cell_of(x)] += px[x];
        o.require(q.rate == huffman(mass).average_length, "rate equals Huffman on cell masses");
        if (!best || q.rate < *best) best = q.rate;
    }
    o.require(best.has_value() && *best == Rational(8, 5), "best 3-cell rate");
    o.require(best.has_value() && *best > solve_ri(pmf).length, "strictly worse than the optimum");
    o.note << colorings << " proper 3-colorings, best rate " << (best ? best->str() : "-") << " > 7/5";
}

// 3. Hexagon.
void hexagon(Outcome& o)
{
    auto pmf = typewriter(6);
    auto sol = solve_ri(pmf);
    auto colors = coloring_of_protocol(sol.protocol, build_characteristic_graph(pmf));
    o.require(sol.length == Rational(1), "L_Y = " + sol.length.str());
    o.require(colors.count == 2, "colors");
    o.note << "L_Y = " << sol.length << ", colors = " << colors.count;
}

// 4. Fully-connected model.
void fully_connected_model(Outcome& o)
{
    auto t0 = Clock::now();
    std::size_t checked = 0;
    for (std::size_t M : {3, 4, 5})
        for (const auto& p : {Rational(1, 5), Rational(3, 10)}) {
            auto pmf = fully_connected(M, p);
            auto cloud = rd_points(pmf, hamming_of(pmf));
            auto mm = static_cast<std::int64_t>(M);
            for (const auto& q : cloud.points) {
                auto K = static_cast<std::int64_t>(q.partition.cell_count());
                o.require(q.distortion == p * Rational(mm - K, mm - 1),
                          "distortion of " + q.partition.describe(pmf.source()) + " at M=" + std::to_string(M));
                ++checked;
            }
            auto L = huffman(marginal_source(pmf)).average_length;
            auto curve = rd_curve(cloud);
            o.require(curve.vertices.size() == 2, "two-vertex envelope");
            o.require(curve.vertices.front().distortion == Rational(0) && curve.vertices.front().rate == L, "left vertex");
            o.require(curve.vertices.back().distortion == p && curve.vertices.back().rate == Rational(0), "right vertex");
            for (std::int64_t k = 0; k <= 10; ++k) {
                Rational D = p * Rational(k, 10);
                o.require(query(curve, D) == L * (Rational(1) - D / p), "envelope line");
            }
        }
    double dt = seconds_since(t0);
    o.require(dt < 5.0, "runtime");
    o.note << checked << " partitions over 6 models, " << dt << " s";
}

// 5. Oracle equivalence and the length inequality chain.
void oracle_equivalence(Outcome& o)
{
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    std::size_t equal = 0;
    for (int i = 0; i < 120; ++i) {
        auto pmf = gen::random_pmf(rng, dim(rng), dim(rng));
        auto got = solve_ri(pmf).length;
        auto want = oracle::exhaustive_ri(pmf, 3);
        o.require(got == want, "instance " + std::to_string(i) + ": " + got.str() + " vs " + want.str());
        equal += got == want;
    }
    std::size_t chains = 0;
    for (int i = 0; i < 60; ++i) {
        auto xyz = gen::random_triple(rng, dim(rng), dim(rng), dim(rng));
        auto with_z = solve_ri_conditional(xyz);
        auto xy = xyz.marginal12();
        auto plain = solve_ri(xy).length;
        auto none = huffman(marginal_source(xy)).average_length;
        o.require(with_z <= plain && plain <= none, "chain on triple " + std::to_string(i));
        chains += with_z <= plain && plain <= none;
    }
    o.note << equal << "/120 equal to the exhaustive oracle, " << chains << "/60 chains hold";
}

// 6. Causal envelope below the zero-delay envelope.
void causal_dominance(Outcome& o)
{
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    std::size_t comparisons = 0;
    double worst = -1e300;
    for (int i = 0; i < 120; ++i) {
        auto pmf = gen::random_pmf(rng, dim(rng), dim(rng));
        auto d = hamming_of(pmf);
        auto zd = rd_curve(pmf, d);
        auto causal = causal_rd_curve(pmf, d);
        // Both envelopes run from the lossless point to the single-cell point.
        for (std::int64_t k = 0; k <= 20; ++k) {
            Rational D = zd.vertices.back().distortion * Rational(k, 20);
            double r_zd = query(zd, D).to_double();
            double r_c = query(causal, std::max(D.to_double(), causal.vertices.front().distortion));
            worst = std::max(worst, r_c - r_zd);
            o.require(r_c <= r_zd + 1e-9, "instance " + std::to_string(i) + " at D=" + D.str());
            ++comparisons;
        }
    }
    o.note << comparisons << " comparisons, max(causal - zero-delay) = " << worst;
}

// 7. Multiterminal sanity.
void multiterminal(Outcome& o)
{
    auto bin = correlated_binary();
    auto dh = DistortionMatrix::hamming(bin.source());
    auto region = enumerate_mt_points(bin, dh, dh);
    auto yes = is_achievable(region, {Rational(0), Rational(1), Rational(0), Rational(0)});
    o.require(yes.achievable && yes.order == DecodeOrder::YX, "(0,1,0,0) under YX");
    auto no = is_achievable(region, {Rational(0), Rational(0), Rational(0), Rational(0)});
    o.require(!no.achievable, "(0,0,0,0) rejected");

    // Constant Y: the Rx-Dx projection is the single-user envelope without SI.
    std::mt19937_64 flat_rng(5);
    bool same = true;
    for (std::size_t nx : {2, 3, 4, 4}) {
        auto flat = gen::random_pmf(flat_rng, nx, 1);
        auto dx = DistortionMatrix::hamming(flat.source());
        auto proj = rx_dx_projection(enumerate_mt_points(flat, dx, DistortionMatrix::hamming(flat.si())), Rational(0));
        auto ref = rd_curve(flat, dx);
        same = same && proj.vertices.size() == ref.vertices.size();
        for (std::size_t i = 0; same && i < ref.vertices.size(); ++i)
            same = proj.vertices[i].distortion == ref.vertices[i].distortion && proj.vertices[i].rate == ref.vertices[i].rate;
    }
    o.require(same, "constant-Y projection equals the single-user envelope");

    auto t0 = Clock::now();
    std::mt19937_64 rng(77);
    auto pmf = gen::random_pmf(rng, 3, 3, 0.3);
    auto r3 = enumerate_mt_points(pmf, DistortionMatrix::hamming(pmf.source()), DistortionMatrix::hamming(pmf.si()));
    std::uniform_int_distribution<std::int64_t> num(0, 12);
    std::size_t positive = 0, max_support = 0;
    for (int q = 0; q < 40; ++q) {
        std::array<Rational, 4> target{Rational(num(rng), 6), Rational(num(rng), 6), Rational(num(rng), 24), Rational(num(rng), 24)};
        for (bool mix : {false, true}) {
            MembershipOptions mo;
            mo.mix_orders = mix;
            auto a = is_achievable(r3, target, mo);
            if (!a.achievable) continue;
            ++positive;
            max_support = std::max(max_support, a.witness.size());
            o.require(a.witness.size() <= 5, "witness support");
            Rational total;
            std::array<Rational, 4> mix_point{};
            for (const auto& w : a.witness) {
                total += w.weight;
                auto c = r3.points[w.point].coords();
                for (int k = 0; k < 4; ++k) mix_point[k] += w.weight * c[k];
            }
            bool covers = total == Rational(1);
            for (int k = 0; k < 4; ++k) covers = covers && mix_point[k] <= target[k];
            o.require(covers, "witness lies below the target");
        }
    }
    double dt = seconds_since(t0);
    o.require(positive > 0, "some random query is achievable");
    o.require(dt < 10.0, "runtime");
    o.note << r3.points.size() << " base points at 3x3, " << positive << " positive answers, max witness support " << max_support
           << ", " << dt << " s";
}

// 8. Prefix-uniqueness bound and its phase transition.
void prefix_bound(Outcome& o)
{
    using Big = boost::multiprecision::cpp_dec_float_50;
    auto t0 = Clock::now();
    double worst = 0;
    int configs = 0;
    for (double n : {8.0, 16.0, 24.0, 40.0, 64.0})
        for (auto [alpha, R] : {std::pair{0.25, 0.125}, std::pair{0.5, 0.25}, std::pair{0.75, 0.25}, std::pair{1.0, 0.5}}) {
            double H = 0.9;
            Big base = Big(1) - boost::multiprecision::pow(Big(2), Big(-n * alpha * H));
            double want = static_cast<double>(boost::multiprecision::pow(base, boost::multiprecision::pow(Big(2), Big(n * R))));
            worst = std::max(worst, std::abs(pc_lower_bound(n, alpha, H, R) - want));
            ++configs;
        }
    o.require(configs == 20 && worst <= 1e-12, "bound vs 50-digit evaluation");

    std::vector<double> prior{0.5, 0.5};
    double bound = pc_lower_bound(24, 0.5, 1.0, 0.25);
    double sigma = std::sqrt(bound * (1 - bound) / 2000.0);
    auto above = simulate_prefix_uniqueness(prior, 24, 0.25, 0.5, 2000, 8);
    auto below = simulate_prefix_uniqueness(prior, 24, 0.25, 0.125, 2000, 8);
    o.require(above.estimate >= bound - 3 * sigma, "P_c at alpha=0.5");
    o.require(below.estimate <= 0.2, "P_c at alpha=0.125");
    double dt = seconds_since(t0);
    o.require(dt < 60.0, "runtime");
    o.note << "max |bound - ref| = " << worst << "; P_c(0.5) = " << above.estimate << " vs bound " << bound << " - 3 sigma "
           << bound - 3 * sigma << "; P_c(0.125) = " << below.estimate << ", " << dt << " s";
}

// 9. Sequential scheme within one bit of R(D).
void sequential_scheme(Outcome& o)
{
    std::vector<Rational> px{Rational(1, 2), Rational(1, 2)};
    auto d = DistortionMatrix::hamming(Alphabet::numbered("X", 2));
    SchemeConfig cfg;
    cfg.D = 0.125;
    cfg.n = 24;
    cfg.epsilon = 0.15;
    cfg.mode = RateMode::Variable;
    cfg.trials = 500;
    cfg.seed = 9;
    auto rep = simulate_scheme(px, d, cfg);
    o.require(rep.trials >= 500, "trial count");
    o.require(rep.bits_per_symbol <= rep.rate + 1 + 0.1, "bits per symbol");
    o.require(rep.typical_fail_rate <= 0.1, "typicality failures");
    o.note << "R(D) = " << rep.rate << ", bits/symbol = " << rep.bits_per_symbol << ", typical failures = " << rep.typical_fail_rate;
}

// 10. Streaming codec.
void streaming(Outcome& o)
{
    auto t0 = Clock::now();
    struct Case {
        const char* name;
        JointPMF pmf;
        Rational D;
    };
    std::vector<Case> cases{{"pentagon", typewriter(5), Rational(0)}, {"fully-connected", fully_connected(4, Rational(1, 5)), Rational(1, 10)}};
    for (const auto& c : cases) {
        auto plan = build_plan(rd_points(c.pmf, hamming_of(c.pmf)), c.D);
        double rate = plan.rate().to_double(), dist = plan.expected_distortion().to_double();
        double worst_rate = 0, worst_dist = -1;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto rep = run_simulation(plan, 100000, seed);
            o.require(rep.sync_errors == 0 && rep.mismatches == 0, std::string(c.name) + " synchronization");
            o.require(std::abs(rep.rate - rate) <= 0.02, std::string(c.name) + " rate");
            o.require(rep.distortion <= dist + 0.01, std::string(c.name) + " distortion");
            worst_rate = std::max(worst_rate, std::abs(rep.rate - rate));
            worst_dist = std::max(worst_dist, rep.distortion - dist);
        }
        o.note << c.name << ": plan rate " << plan.rate() << ", max |rate dev| " << worst_rate << ", max excess distortion "
               << worst_dist << "; ";
    }
    double dt = seconds_since(t0);
    o.require(dt < 30.0, "runtime");
    o.note << dt << " s";
}

// 11. Five-symbol channel with split-cell refinement (reconstructed support).
void split_channel_targets(Outcome& o)
{
    const Rational p(3, 10);
    auto pmf = split_channel(p);
    auto d = hamming_of(pmf);
    auto cloud = rd_points(pmf, d);
    auto best_for = [&](std::size_t cells) {
        std::optional<Rational> dist, rate;
        for (const auto& q : cloud.points) {
            if (q.partition.cell_count() != cells) continue;
            if (!dist || q.distortion < *dist) {
                dist = q.distortion;
                rate = q.rate;
            } else if (q.distortion == *dist && q.rate < *rate) {
                rate = q.rate;
            }
        }
        return std::pair{*dist, *rate};
    };
    auto [d2, r2] = best_for(2);
    auto [d3, r3] = best_for(3);
    auto refined = evaluate_partition(pmf, d, Partition::from_cells(5, {{0, 3}, {1}, {2}, {4}}));
    o.require(d2 == Rational(13, 60) * p && r2 == Rational(1), "2-cell optimum");
    o.require(d3 == p / Rational(60) && r3 == Rational(8, 5), "3-cell optimum");
    o.require(refined.distortion == p / Rational(60) && refined.rate == Rational(7, 5), "refined partition");
    o.note << "reconstructed channel at p = 3/10: 2 cells D = " << d2 << " R = " << r2 << "; 3 cells D = " << d3 << " R = " << r3
           << "; {1,4}{2}{3}{5} D = " << refined.distortion << " R = " << refined.rate;
}

} // namespace

int main()
{
    std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria{
        {1, pentagon_optimum},   {2, pentagon_coloring_baseline}, {3, hexagon},           {4, fully_connected_model},
        {5, oracle_equivalence}, {6, causal_dominance},           {7, multiterminal},     {8, prefix_bound},
        {9, sequential_scheme},  {10, streaming},                 {11, split_channel_targets},
    };
    int failures = 0;
    for (auto& [id, run] : criteria) {
        Outcome o;
        try {
            run(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.note << "exception: " << e.what();
        }
        std::cout << "criterion " << id << ": " << (o.ok ? "PASS" : "FAIL") << " - " << o.note.str() << std::endl;
        failures += !o.ok;
    }
    return failures == 0 ? 0 : 1;
}
