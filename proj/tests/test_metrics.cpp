#include "evfi/errors.hpp"
#include "evfi/metrics.hpp"
#include "evfi/pipeline.hpp"
#include "evfi/scene.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace evfi;

namespace {

EventTensor tensor(int w, int h) {
  return {CountPlane::Zero(h, w), CountPlane::Zero(h, w), Plane<double>::Constant(h, w, -1.0),
          Plane<double>::Constant(h, w, -1.0)};
}

Frame checkerboard(int n) {
  Frame f(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) f(y, x) = double((x + y) % 2);
  return f;
}

}  // namespace

TEST_CASE("psnr") {
  gen::Rng r(1);
  const auto a = gen::frame(r, 16, 12);
  CHECK(psnr(a, a) == kPsnrCap);
  CHECK(psnr(Frame::Zero(4, 4), Frame::Ones(4, 4)) == doctest::Approx(0.0));
  const Frame b = (a + 16.0 / 255.0).eval();
  CHECK(psnr(a, b) == doctest::Approx(20.0 * std::log10(255.0 / 16.0)).epsilon(1e-12));
  CHECK(psnr(a, b) == doctest::Approx(24.05).epsilon(1e-3));
  for (int k = 0; k < 10; ++k) {
    const auto x = gen::frame(r, 16, 12, 0.0, 0.8), y = gen::frame(r, 16, 12, 0.0, 0.8);
    CHECK(psnr(x, y) == doctest::Approx(oracle::psnr(x, y)).epsilon(1e-12));
    CHECK(psnr(x, y) == psnr(y, x));
    const double c = r.uniform(0.0, 0.2);
    CHECK(psnr(x + c, y + c) == doctest::Approx(psnr(x, y)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(psnr(a, Frame::Zero(3, 3)), ArgumentError);
  CHECK_THROWS_AS(psnr(a, a, 0.0), ArgumentError);
}

TEST_CASE("ssim") {
  gen::Rng r(2);
  SUBCASE("identical frames") {
    for (int k = 0; k < 20; ++k) {
      const auto a = gen::frame(r, r.integer(11, 40), r.integer(11, 40));
      CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("inverted checkerboard is anti-correlated") {
    const auto a = checkerboard(24);
    const Frame b = 1.0 - a;
    const double s = ssim(a, b);
    CHECK(s < 0.0);
    CHECK(s == doctest::Approx(oracle::ssim(a, b)).epsilon(1e-9));
  }
  SUBCASE("constant offset") {
    const auto a = gen::frame(r, 32, 32, 0.0, 0.8);
    const double s1 = ssim(a, a + 0.05);
    const double s2 = ssim(a, a + 0.1);
    CHECK(s1 > 0.0);
    CHECK(s1 < 1.0);
    CHECK(s2 > 0.0);
    CHECK(s2 < s1);
  }
  SUBCASE("matches the windowed oracle") {
    for (int k = 0; k < 5; ++k) {
      const auto a = gen::frame(r, 20, 15), b = gen::frame(r, 20, 15);
      CHECK(ssim(a, b) == doctest::Approx(oracle::ssim(a, b)).epsilon(1e-9));
    }
  }
  SUBCASE("too small") { CHECK_THROWS_AS(ssim(Frame::Zero(10, 20), Frame::Zero(10, 20)), ArgumentError); }
}

TEST_CASE("interpolation error") {
  gen::Rng r(3);
  const auto a = gen::frame(r, 10, 10);
  CHECK(interpolation_error(a, a) == 0.0);
  CHECK(interpolation_error(a, a + 10.0 / 255.0) == doctest::Approx(10.0).epsilon(1e-12));
  for (int k = 0; k < 10; ++k) {
    const auto x = gen::frame(r, 13, 7), y = gen::frame(r, 13, 7);
    CHECK(std::abs(interpolation_error(x, y) - oracle::rms255(x, y)) <= 1e-9);
  }
  CHECK_THROWS_AS(interpolation_error(a, Frame::Zero(10, 9)), ArgumentError);
}

TEST_CASE("binarize_event_count") {
  auto et = tensor(4, 3);
  auto m = binarize_event_count(et);
  CHECK((m.pos == 0).all());
  CHECK((m.neg == 0).all());
  et.pos_count(1, 2) = 3;
  et.neg_count(0, 0) = 1;
  et.pos_count(2, 3) = 1;
  m = binarize_event_count(et);
  CHECK(m.pos(1, 2) == 1);
  CHECK(m.pos.cast<int>().sum() == 2);
  CHECK(m.neg.cast<int>().sum() == 1);
}

TEST_CASE("binarize_prediction") {
  SUBCASE("no events, no change") {
    const Frame f = Frame::Constant(3, 3, 0.5);
    const auto m = binarize_prediction(f, f, tensor(3, 3));
    CHECK((m.pos == 0).all());
    CHECK((m.neg == 0).all());
  }
  SUBCASE("2x2 order statistics") {
    const Frame ref = Frame::Constant(2, 2, 0.5);
    Frame pred(2, 2);
    pred << 0.5 * std::exp(0.4), 0.5 * std::exp(0.1), 0.5 * std::exp(-0.2), 0.5;
    auto et = tensor(2, 2);
    et.pos_count(1, 1) = 2;
    et.neg_count(0, 1) = 1;
    const auto m = binarize_prediction(pred, ref, et);
    CHECK(m.pos(0, 0) == 1);
    CHECK(m.pos.cast<int>().sum() == 1);
    CHECK(m.neg(1, 0) == 1);
    CHECK(m.neg.cast<int>().sum() == 1);
  }
  SUBCASE("top-k count when values are distinct") {
    gen::Rng r(4);
    for (int k = 0; k < 20; ++k) {
      const auto pred = gen::frame(r, 9, 8, 0.05, 1.0), ref = gen::frame(r, 9, 8, 0.05, 1.0);
      auto et = tensor(9, 8);
      const int tp = r.integer(0, 30), tn = r.integer(0, 30);
      for (int i = 0; i < tp; ++i) et.pos_count(i) = 1;
      for (int i = 0; i < tn; ++i) et.neg_count(71 - i) = 2;
      const auto m = binarize_prediction(pred, ref, et);
      CHECK(m.pos.cast<int>().sum() == tp);
      CHECK(m.neg.cast<int>().sum() == tn);
      // The marked set is exactly the tp largest log ratios.
      std::vector<double> d;
      for (Eigen::Index i = 0; i < pred.size(); ++i) d.push_back(std::log(pred(i) / ref(i)));
      auto sorted = d;
      std::sort(sorted.rbegin(), sorted.rend());
      for (Eigen::Index i = 0; i < pred.size(); ++i)
        if (tp > 0) CHECK(bool(m.pos(i)) == (d[std::size_t(i)] >= sorted[std::size_t(tp - 1)]));
    }
  }
  SUBCASE("ties at the threshold are all marked") {
    Frame pred = Frame::Constant(2, 3, 0.5);
    pred(0, 0) = 0.9;
    auto et = tensor(3, 2);
    et.pos_count(0, 0) = 1;
    et.pos_count(0, 1) = 1;
    const auto m = binarize_prediction(pred, Frame::Constant(2, 3, 0.5), et);
    CHECK(m.pos.cast<int>().sum() == 6);
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(binarize_prediction(Frame::Zero(3, 3), Frame::Zero(3, 3), tensor(4, 3)), ArgumentError);
  }
}

TEST_CASE("gaussian blur") {
  gen::Rng r(5);
  const auto in = gen::frame(r, 9, 6);
  CHECK((gaussian_blur5(in, 0.0) == in).all());
  for (double sigma : {0.5, 1.0, 2.0}) {
    CHECK((gaussian_blur5(in, sigma) - oracle::blur5(in, sigma)).abs().maxCoeff() <= 1e-12);
    CHECK(((gaussian_blur5(Plane<double>::Constant(5, 7, 0.3), sigma) - 0.3).abs() <= 1e-15).all());
  }
  CHECK_THROWS_AS(gaussian_blur5(in, -1.0), ArgumentError);
}

TEST_CASE("motion consistency loss") {
  SUBCASE("identical maps give zero") {
    gen::Rng r(6);
    for (int k = 0; k < 10; ++k) {
      BinarizedEventMap m{(gen::frame(r, 8, 8) > 0.5).cast<std::uint8_t>(),
                          (gen::frame(r, 8, 8) > 0.5).cast<std::uint8_t>()};
      CHECK(event_map_l1(m, m, 1.0) == 0.0);
      CHECK(event_map_l1(m, m, 0.0) == 0.0);
    }
  }
  SUBCASE("all ones against all zeros, no blur") {
    const BinarizedEventMap ones{Plane<std::uint8_t>::Ones(5, 6), Plane<std::uint8_t>::Ones(5, 6)};
    const BinarizedEventMap zeros{Plane<std::uint8_t>::Zero(5, 6), Plane<std::uint8_t>::Zero(5, 6)};
    CHECK(event_map_l1(ones, zeros, 0.0) + event_map_l1(ones, zeros, 0.0) == 2.0);
  }
  SUBCASE("2x2 worked example") {
    // Predicted marks: pos at the 0.4 pixel (0,0), neg at the -0.2 pixel (1,0).
    // Observed events sit one column over, at (0,1) and (1,1). On a 2x2 grid
    // the mirrored 5-tap blur keeps weight a on the pixel itself and b on its
    // neighbour along each axis, a + b = 1, so each channel's blurred
    // difference has L1 norm 2(a - b) and the term is 4(a - b) / 8.
    const Frame i0 = Frame::Constant(2, 2, 0.5);
    Frame pred(2, 2);
    pred << 0.5 * std::exp(0.4), 0.5 * std::exp(0.1), 0.5 * std::exp(-0.2), 0.5;
    auto et = tensor(2, 2);
    et.pos_count(0, 1) = 1;
    et.neg_count(1, 1) = 1;
    const double e2 = std::exp(-2.0), eh = std::exp(-0.5);
    const double a = (1 + 2 * e2) / (1 + 2 * e2 + 2 * eh);
    const double b = 2 * eh / (1 + 2 * e2 + 2 * eh);
    const double expected = (a - b) / 2;
    const Frame i1 = Frame::Constant(2, 2, 0.7);
    const double loss = motion_consistency_loss(pred, i0, i1, i1, et, tensor(2, 2), 1.0);
    CHECK(loss == doctest::Approx(expected).epsilon(1e-12));
    CHECK(motion_consistency_loss(pred, i0, i1, i1, et, tensor(2, 2), 0.0) == doctest::Approx(0.5));
  }
  SUBCASE("nonnegative") {
    gen::Rng r(7);
    for (int k = 0; k < 10; ++k) {
      auto et0 = tensor(10, 8), et1 = tensor(10, 8);
      for (Eigen::Index i = 0; i < 80; ++i) {
        et0.pos_count(i) = r.integer(0, 1);
        et1.neg_count(i) = r.integer(0, 1);
      }
      const double l = motion_consistency_loss(gen::frame(r, 10, 8), gen::frame(r, 10, 8), gen::frame(r, 10, 8),
                                               gen::frame(r, 10, 8), et0, et1);
      CHECK(l >= 0.0);
    }
  }
  SUBCASE("uniform preset, perfect prediction") {
    const auto scene = make_preset("uniform");
    const auto s = simulate_scene(scene);
    const auto i0 = render_frame(scene, 0), i1 = render_frame(scene, 1);
    for (double tau : {0.25, 0.5, 0.75}) {
      const auto gt = render_frame(scene, tau);
      CHECK(motion_consistency_loss(gt, i0, gt, i1, to_event_tensor(s, 0, tau), to_event_tensor(s, tau, 1)) <= 0.02);
    }
  }
  SUBCASE("size mismatch") {
    const Frame a = Frame::Zero(3, 3);
    CHECK_THROWS_AS(motion_consistency_loss(a, a, a, Frame::Zero(3, 4), tensor(3, 3), tensor(3, 3)), ArgumentError);
  }
}

TEST_CASE("baseline losses") {
  gen::Rng r(8);
  const auto gt = gen::frame(r, 12, 9, 0.0, 0.8);
  const auto c = FlowField::constant(12, 9, 1.5, -2.0);
  auto z = baseline_losses(gt, gt, gt, gt, c, c);
  CHECK(z.rec == 0.0);
  CHECK(z.warp == 0.0);
  CHECK(z.smooth == 0.0);

  z = baseline_losses(gt + 0.1, gt, gt, gt, c, c);
  CHECK(z.rec == doctest::Approx(0.1).epsilon(1e-12));

  const double s = 0.7;
  FlowField ramp(12, 9);
  for (int x = 0; x < 12; ++x) ramp.u.col(x).setConstant(s * x);
  z = baseline_losses(gt, gt, gt, gt, ramp, FlowField(12, 9));
  CHECK(z.smooth == doctest::Approx(s * (11 * 9) / (12.0 * 9)).epsilon(1e-12));
  for (int k = 0; k < 10; ++k) {
    const auto f = gen::flow(r, 7, 5, 3), g = gen::flow(r, 7, 5, 3);
    const Frame q = Frame::Zero(5, 7);
    CHECK(baseline_losses(q, q, q, q, f, g).smooth == doctest::Approx(oracle::tv(f) + oracle::tv(g)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(baseline_losses(gt, gt, gt, gt, FlowField(3, 3), c), ArgumentError);
}

TEST_CASE("loss weights and total") {
  const LossWeights w;
  CHECK(w.lambda_mc == 1.0);
  CHECK(w.lambda_rec == 1.0);
  CHECK(w.lambda_per == 0.2);
  CHECK(w.lambda_warp == 0.8);
  CHECK(w.lambda_smooth == 0.8);
  CHECK(total_loss({}) == 0.0);
  CHECK(total_loss({1, 1, 0, 1, 1}) == doctest::Approx(3.6).epsilon(1e-15));
  gen::Rng r(9);
  for (int k = 0; k < 20; ++k) {
    const LossParts p{r.uniform(), r.uniform(), r.uniform(), r.uniform(), r.uniform()};
    const LossParts p2{2 * p.mc, 2 * p.rec, 2 * p.per, 2 * p.warp, 2 * p.smooth};
    CHECK(total_loss(p2) == doctest::Approx(2 * total_loss(p)).epsilon(1e-14));
    const LossWeights v{r.uniform(), r.uniform(), r.uniform(), r.uniform(), r.uniform()};
    const LossWeights sum{w.lambda_mc + v.lambda_mc, w.lambda_rec + v.lambda_rec, w.lambda_per + v.lambda_per,
                          w.lambda_warp + v.lambda_warp, w.lambda_smooth + v.lambda_smooth};
    CHECK(total_loss(p, sum) == doctest::Approx(total_loss(p, w) + total_loss(p, v)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(total_loss({-0.1, 0, 0, 0, 0}), ArgumentError);
}
