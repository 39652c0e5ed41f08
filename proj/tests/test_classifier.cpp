#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "nhse/classifier.hpp"
#include "nhse/errors.hpp"
#include "nhse/run.hpp"

using namespace nhse;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::VectorXcd normalized(Eigen::VectorXcd v) { return v / v.norm(); }

LocalizationMetrics weights(double boundary, double defect) {
    LocalizationMetrics m;
    m.w_left = boundary;
    m.w_defect = defect;
    return m;
}

Label rule(Enclosure e, double boundary, double defect, bool degenerate = false) {
    return classify_state({cplx(0.1), weights(boundary, defect), e, degenerate}, Thresholds{});
}

const StateRecord& nearest(const std::vector<StateRecord>& s, cplx e) {
    return *std::min_element(s.begin(), s.end(), [&](const StateRecord& a, const StateRecord& b) {
        return std::abs(a.energy - e) < std::abs(b.energy - e);
    });
}

std::vector<std::size_t> sizes() { return SizeRange{}.sizes(); }

HnParams family(double t4) {
    HnParams p;
    p.t4 = t4;
    p.set_strong_defect();
    return p;
}

RunConfig ssh_point(double gamma, std::optional<double> p = std::nullopt) {
    RunConfig c;
    c.model = ModelKind::ssh;
    c.ssh.t = -1.0;
    c.ssh.gamma = gamma;
    if (p) {
        c.defect = DefectMode::strength;
        c.ssh.p = *p;
    }
    return c;
}

} // namespace

TEST_CASE("metrics of a delta at the left end") {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(30);
    psi(0) = 1.0;
    const auto m = localization_metrics(psi, 15, 5);
    CHECK(m.ipr == 1.0);
    CHECK(m.w_left == 1.0);
    CHECK(m.w_right == 0.0);
    CHECK(m.w_defect == 0.0);
    CHECK(m.com == 0.0);
    CHECK(m.peak_site == 0);
}

TEST_CASE("metrics of a uniform state") {
    const auto psi = normalized(Eigen::VectorXcd::Ones(100));
    const auto m = localization_metrics(psi, 50, 5);
    CHECK_THAT(m.ipr, WithinAbs(0.01, 1e-15));
    CHECK_THAT(m.w_left, WithinAbs(0.05, 1e-15));
    CHECK_THAT(m.w_right, WithinAbs(0.05, 1e-15));
    CHECK_THAT(m.w_defect, WithinAbs(0.11, 1e-15));
    CHECK_THAT(m.com, WithinAbs(49.5, 1e-12));
}

TEST_CASE("metrics of an exponential profile") {
    // |psi_n| ~ 0.5^n on 50 sites; values from the numpy oracle
    Eigen::VectorXcd psi(50);
    for (int n = 0; n < 50; ++n) psi(n) = std::polar(std::pow(0.5, n), 0.3 * n);
    const auto m = localization_metrics(normalized(psi), 25, 5);
    CHECK_THAT(m.w_left, WithinAbs(0.9990234375, 1e-14));
    CHECK_THAT(m.ipr, WithinAbs(0.6, 1e-14));
    CHECK_THAT(m.com, WithinAbs(1.0 / 3.0, 1e-14));
    CHECK(m.w_right < 1e-25);
}

TEST_CASE("weights stay in [0, 1] and the windows never overlap") {
    Eigen::VectorXcd psi(42);
    for (int n = 0; n < 42; ++n) psi(n) = cplx(std::sin(0.7 * n), std::cos(1.3 * n));
    psi = normalized(psi);
    for (std::size_t d : {5u, 11u, 21u, 36u}) {
        const auto m = localization_metrics(psi, d, 5);
        for (double x : {m.w_left, m.w_right, m.w_defect, m.ipr}) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0 + 1e-15);
        }
        if (d >= 10 && d + 10 < 42) CHECK(m.w_left + m.w_right + m.w_defect <= 1.0 + 1e-14);
    }
}

TEST_CASE("overlapping windows and bad defect sites are rejected") {
    const auto psi = normalized(Eigen::VectorXcd::Ones(21));
    CHECK_THROWS_AS(localization_metrics(psi, 10, 5), SpecificationError);
    const auto ok = normalized(Eigen::VectorXcd::Ones(22));
    CHECK_NOTHROW(localization_metrics(ok, 10, 5));
    CHECK_THROWS_AS(localization_metrics(ok, 22, 5), SpecificationError);
}

TEST_CASE("decision rule") {
    using E = Enclosure;
    SECTION("edge needs an outside, degenerate, boundary state") {
        CHECK(rule(E::outside, 0.5, 0.1, true) == Label::edge);
        CHECK(rule(E::outside, 0.5, 0.1, false) == Label::extended);
        CHECK(rule(E::on, 0.5, 0.1, true) == Label::extended);
        CHECK(rule(E::inside, 0.5, 0.1, true) == Label::skin);
    }
    SECTION("defect is on or outside the loop") {
        CHECK(rule(E::on, 0.1, 0.5) == Label::defect);
        CHECK(rule(E::outside, 0.1, 0.5) == Label::defect);
        CHECK(rule(E::outside, 0.1, 0.5, true) == Label::defect);
        CHECK(rule(E::inside, 0.1, 0.5) == Label::extended);
    }
    SECTION("hybrid ignores the enclosure") {
        for (auto e : {E::inside, E::on, E::outside}) CHECK(rule(e, 0.5, 0.5) == Label::hybrid);
    }
    SECTION("skin is inside with boundary weight") {
        CHECK(rule(E::inside, 0.5, 0.0) == Label::skin);
        CHECK(rule(E::on, 0.5, 0.0) == Label::extended);
        CHECK(rule(E::inside, 0.1, 0.1) == Label::extended);
    }
    SECTION("thresholds are strict") {
        const Thresholds th;
        CHECK(rule(E::inside, th.theta_b, 0.0) == Label::extended);
        CHECK(rule(E::on, 0.0, th.theta_d) == Label::extended);
        CHECK(rule(E::inside, std::nextafter(th.theta_b, 1.0), 0.0) == Label::skin);
    }
}

TEST_CASE("the three quoted states of the strong-defect HN chain") {
    const auto pt = analyse(RunConfig{});
    REQUIRE(pt.states.size() == 50);
    CHECK(nearest(pt.states, 0.0).label == Label::defect);
    CHECK(nearest(pt.states, {-0.6174, 0.0396}).label == Label::hybrid);
    CHECK(nearest(pt.states, {-1.4978, 0.25}).label == Label::skin);

    const auto& zero = nearest(pt.states, 0.0);
    CHECK(zero.metrics.peak_site == 24);
    CHECK(zero.metrics.w_defect == 1.0);

    SECTION("every state gets exactly one label") {
        CHECK(count_labels(pt.states).total() == 50);
        for (std::size_t i = 0; i < pt.states.size(); ++i) CHECK(pt.states[i].index == i);
    }
    SECTION("records agree with the rule") {
        for (const auto& s : pt.states) CHECK(s.label == classify_state({s.energy, s.metrics, s.enclosure,
                                                                         s.label == Label::edge}, Thresholds{}));
    }
}

TEST_CASE("critical size against the numpy oracle") {
    // frozen from tests/oracles/critical_size.py
    const std::vector<std::pair<double, std::size_t>> expect{{0.3, 22}, {0.4, 24}, {0.5, 24}, {0.6, 36},
                                                             {0.7, 76}, {0.75, 62}, {0.8, 82}, {0.9, 84}};
    for (auto [t4, n] : expect) {
        const auto r = critical_size(family(t4), sizes(), Thresholds{});
        INFO("t4 = " << t4);
        REQUIRE(r.n_c.has_value());
        CHECK(*r.n_c == n);
        CHECK(r.scanned.back().n_sites == n);
        CHECK(r.scanned.back().hybrids == 0);
        for (std::size_t i = 0; i + 1 < r.scanned.size(); ++i) CHECK(r.scanned[i].hybrids > 0);
    }
}

TEST_CASE("critical size grows with t4 on the tenths grid") {
    std::optional<std::size_t> last;
    for (double t4 : {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        const auto r = critical_size(family(t4), sizes(), Thresholds{});
        REQUIRE(r.n_c.has_value());
        if (last) CHECK(*r.n_c >= *last);
        last = r.n_c;
    }
}

TEST_CASE("critical size of the quoted chain lies between 50 and 120") {
    const auto r = critical_size(family(0.75), sizes(), Thresholds{});
    REQUIRE(r.n_c.has_value());
    CHECK(*r.n_c > 50);
    CHECK(*r.n_c <= 120);
}

TEST_CASE("reciprocal chain: hybrids are a window artifact of short chains") {
    // With t1 = t2 and t3 = t4 there is no skin effect, yet standing waves on a
    // short chain put more than theta_d in the 11-site defect window and more
    // than theta_b at an end. The oracle finds them gone from N = 50 on.
    HnParams p;
    p.t1 = p.t2 = 1.0;
    p.t3 = p.t4 = 1.0;
    p.set_strong_defect();
    const auto r = critical_size(p, sizes(), Thresholds{});
    REQUIRE(r.n_c.has_value());
    CHECK(*r.n_c == 50);
    CHECK(r.scanned.front().hybrids == 15);
}

TEST_CASE("critical size without a qualifying size") {
    const auto r = critical_size(family(0.9), {22, 24, 26}, Thresholds{});
    CHECK_FALSE(r.n_c.has_value());
    CHECK(r.scanned.size() == 3);
    CHECK_THROWS_AS(critical_size(family(0.9), {30, 22}, Thresholds{}), SpecificationError);
}

TEST_CASE("gap scan of the defect-free SSH chain") {
    SshParams p;
    p.gamma = 0.2;
    p.n_cells_left = p.n_cells_right = 15;
    const auto rows = gap_scan(p, -2.0, 0.0, 0.02, Thresholds{});
    REQUIRE(rows.size() == 101);
    CHECK_THAT(rows.front().t, WithinAbs(-2.0, 1e-15));
    CHECK_THAT(rows.back().t, WithinAbs(0.0, 1e-12));

    std::vector<double> with_edge;
    double im_mid = 0.0;
    for (const auto& r : rows) {
        CHECK(r.max_residual < 1e-10 * 10);
        if (r.edge) {
            with_edge.push_back(r.t);
            CHECK(r.edge_abs_im < 1e-8);
            CHECK(r.gap_width > 0.0);
        }
        if (r.t >= -1.2 - 1e-9 && r.t <= -0.8 + 1e-9) im_mid = std::max(im_mid, r.max_abs_im);
    }
    REQUIRE_FALSE(with_edge.empty());
    CHECK_THAT(with_edge.front(), WithinAbs(-1.4, 0.05));
    CHECK_THAT(with_edge.back(), WithinAbs(-0.6, 0.05));
    CHECK(im_mid > 1e-6);
    // the edge window is one contiguous run of grid points
    CHECK(with_edge.size() == static_cast<std::size_t>(std::lround((with_edge.back() - with_edge.front()) / 0.02)) + 1);
}

TEST_CASE("gap scan in the Hermitian limit") {
    SshParams p;
    p.gamma = 0.0;
    p.n_cells_left = p.n_cells_right = 15;
    const auto rows = gap_scan(p, -2.0, -2.0, 0.02, Thresholds{});
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].edge);
    CHECK(rows[0].max_abs_im < 1e-10);
    CHECK(rows[0].gap_width > 0.0);
    CHECK_THROWS_AS(gap_scan(p, 0.0, -1.0, 0.02, Thresholds{}), SpecificationError);
    CHECK_THROWS_AS(gap_scan(p, -1.0, 0.0, 0.0, Thresholds{}), SpecificationError);
}

TEST_CASE("gamma sequence: edge and defect label counts") {
    const std::vector<double> gammas{0.2, 0.4, 0.49, 0.6};
    const std::vector<std::size_t> edges{2, 2, 0, 0}, defects{2, 2, 2, 0};
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const auto c = ssh_point(gammas[i]);
        const auto pt = analyse(c);
        std::size_t defect = 0;
        for (const auto& s : pt.states)
            if (s.label == Label::defect && std::abs(s.energy) >= zero_mode_tolerance) ++defect;
        INFO("gamma = " << gammas[i]);
        CHECK(count_labels(pt.states)[Label::edge] == edges[i]);
        CHECK(defect == defects[i]);
        CHECK(count_labels(pt.states).total() == 101);
    }
}

TEST_CASE("p sequence: the trivial defect state disappears at p = 0.9") {
    const std::vector<double> ps{0.3, 0.6, 0.9};
    const std::vector<std::size_t> trivial{1, 1, 0};
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto c = ssh_point(0.4, ps[i]);
        const auto row = summarize(analyse(c), defect_index(c), ps[i]);
        INFO("p = " << ps[i]);
        CHECK(row.trivial_defect == trivial[i]);
        CHECK(row.nontrivial_defect > 0);
    }
}
