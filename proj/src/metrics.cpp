#include "evfi/metrics.hpp"

#include "evfi/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace evfi {

namespace {

void check_same(const Frame& a, const Frame& b) {
  if (!same_shape(a, b)) throw ArgumentError("frame dimensions differ");
}

std::array<double, 11> ssim_kernel() {
  std::array<double, 11> k{};
  double sum = 0.0;
  for (int i = 0; i < 11; ++i) {
    const double d = i - 5;
    k[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    sum += k[i];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable 'valid' filtering with an 11-tap kernel.
Plane<double> filter_valid(const Plane<double>& in, const std::array<double, 11>& k) {
  const auto h = in.rows();
  const auto w = in.cols();
  Plane<double> tmp = Plane<double>::Zero(h, w - 10);
  for (Eigen::Index x = 0; x + 10 < w; ++x)
    for (int i = 0; i < 11; ++i) tmp.col(x) += k[i] * in.col(x + i);
  Plane<double> out = Plane<double>::Zero(h - 10, w - 10);
  for (Eigen::Index y = 0; y + 10 < h; ++y)
    for (int i = 0; i < 11; ++i) out.row(y) += k[i] * tmp.row(y + i);
  return out;
}

Eigen::Index reflect101(Eigen::Index i, Eigen::Index n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return i;
}

}  // namespace

double psnr(const Frame& a, const Frame& b, double peak) {
  check_same(a, b);
  if (!(peak > 0)) throw ArgumentError("peak must be positive");
  const double mse = (a - b).square().mean();
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

double ssim(const Frame& a, const Frame& b) {
  check_same(a, b);
  if (a.rows() < 11 || a.cols() < 11) throw ArgumentError("ssim needs frames of at least 11x11");
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  static const auto k = ssim_kernel();
  const Plane<double> mu_a = filter_valid(a, k);
  const Plane<double> mu_b = filter_valid(b, k);
  const Plane<double> var_a = filter_valid(a * a, k) - mu_a * mu_a;
  const Plane<double> var_b = filter_valid(b * b, k) - mu_b * mu_b;
  const Plane<double> cov = filter_valid(a * b, k) - mu_a * mu_b;
  const Plane<double> num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
  const Plane<double> den = (mu_a.square() + mu_b.square() + c1) * (var_a + var_b + c2);
  return (num / den).mean();
}

double interpolation_error(const Frame& a, const Frame& b) {
  check_same(a, b);
  return std::sqrt((255.0 * (a - b)).square().mean());
}

BinarizedEventMap binarize_event_count(const EventTensor& et) {
  return {(et.pos_count > 0).cast<std::uint8_t>(), (et.neg_count > 0).cast<std::uint8_t>()};
}

BinarizedEventMap binarize_prediction(const Frame& pred, const Frame& ref, const EventTensor& et, double floor) {
  check_same(pred, ref);
  if (!same_shape(pred, et.pos_count) || !same_shape(pred, et.neg_count))
    throw ArgumentError("event tensor dimensions differ from frames");
  const Plane<double> diff = (pred.cwiseMax(floor) / ref.cwiseMax(floor)).log();
  const auto t_pos = Eigen::Index((et.pos_count > 0).count());
  const auto t_neg = Eigen::Index((et.neg_count > 0).count());

  BinarizedEventMap out{Plane<std::uint8_t>::Zero(diff.rows(), diff.cols()),
                        Plane<std::uint8_t>::Zero(diff.rows(), diff.cols())};
  std::vector<double> sorted(diff.data(), diff.data() + diff.size());
  if (t_pos > 0) {
    std::nth_element(sorted.begin(), sorted.begin() + (t_pos - 1), sorted.end(), std::greater<>());
    out.pos = (diff >= sorted[std::size_t(t_pos - 1)]).cast<std::uint8_t>();
  }
  if (t_neg > 0) {
    std::nth_element(sorted.begin(), sorted.begin() + (t_neg - 1), sorted.end());
    out.neg = (diff <= sorted[std::size_t(t_neg - 1)]).cast<std::uint8_t>();
  }
  return out;
}

Plane<double> gaussian_blur5(const Plane<double>& in, double sigma) {
  if (sigma < 0) throw ArgumentError("blur sigma must be nonnegative");
  if (sigma == 0) return in;
  std::array<double, 5> k{};
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    k[i] = std::exp(-double((i - 2) * (i - 2)) / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (auto& v : k) v /= sum;
  const auto h = in.rows();
  const auto w = in.cols();
  Plane<double> tmp = Plane<double>::Zero(h, w);
  for (Eigen::Index x = 0; x < w; ++x)
    for (int i = 0; i < 5; ++i) tmp.col(x) += k[i] * in.col(reflect101(x + i - 2, w));
  Plane<double> out = Plane<double>::Zero(h, w);
  for (Eigen::Index y = 0; y < h; ++y)
    for (int i = 0; i < 5; ++i) out.row(y) += k[i] * tmp.row(reflect101(y + i - 2, h));
  return out;
}

double event_map_l1(const BinarizedEventMap& predicted, const BinarizedEventMap& observed, double blur_sigma) {
  if (!same_shape(predicted.pos, observed.pos) || !same_shape(predicted.neg, observed.neg) ||
      !same_shape(predicted.pos, predicted.neg))
    throw ArgumentError("event map dimensions differ");
  auto channel = [&](const Plane<std::uint8_t>& p, const Plane<std::uint8_t>& o) {
    return (gaussian_blur5(p.cast<double>(), blur_sigma) - gaussian_blur5(o.cast<double>(), blur_sigma)).abs().sum();
  };
  const double n = 2.0 * double(predicted.pos.size());
  return (channel(predicted.pos, observed.pos) + channel(predicted.neg, observed.neg)) / n;
}

double motion_consistency_loss(const Frame& pred0, const Frame& i0, const Frame& pred1, const Frame& i1,
                               const EventTensor& et_0t, const EventTensor& et_t1, double blur_sigma, double floor) {
  check_same(pred0, i0);
  check_same(pred1, i1);
  check_same(pred0, pred1);
  const double first = event_map_l1(binarize_prediction(pred0, i0, et_0t, floor), binarize_event_count(et_0t),
                                    blur_sigma);
  const double second = event_map_l1(binarize_prediction(i1, pred1, et_t1, floor), binarize_event_count(et_t1),
                                     blur_sigma);
  return first + second;
}

double total_variation(const FlowField& f) {
  const auto h = f.height();
  const auto w = f.width();
  double tv = 0.0;
  if (w > 1) {
    tv += (f.u.rightCols(w - 1) - f.u.leftCols(w - 1)).abs().sum();
    tv += (f.v.rightCols(w - 1) - f.v.leftCols(w - 1)).abs().sum();
  }
  if (h > 1) {
    tv += (f.u.bottomRows(h - 1) - f.u.topRows(h - 1)).abs().sum();
    tv += (f.v.bottomRows(h - 1) - f.v.topRows(h - 1)).abs().sum();
  }
  return tv / double(h * w);
}

BaselineLosses baseline_losses(const Frame& pred, const Frame& gt, const Frame& warped0, const Frame& warped1,
                               const FlowField& f01, const FlowField& f10) {
  check_same(pred, gt);
  check_same(warped0, gt);
  check_same(warped1, gt);
  if (!same_shape(f01.u, gt) || !same_shape(f10.u, gt)) throw ArgumentError("flow dimensions differ from frames");
  BaselineLosses out;
  out.rec = (pred - gt).abs().mean();
  out.warp = (warped0 - gt).abs().mean() + (warped1 - gt).abs().mean();
  out.smooth = total_variation(f01) + total_variation(f10);
  return out;
}

double total_loss(const LossParts& p, const LossWeights& w) {
  for (double v : {p.mc, p.rec, p.per, p.warp, p.smooth})
    if (!(v >= 0)) throw ArgumentError("loss parts must be nonnegative");
  for (double v : {w.lambda_mc, w.lambda_rec, w.lambda_per, w.lambda_warp, w.lambda_smooth})
    if (!(v >= 0)) throw ArgumentError("loss weights must be nonnegative");
  return w.lambda_mc * p.mc + w.lambda_rec * p.rec + w.lambda_per * p.per + w.lambda_warp * p.warp +
         w.lambda_smooth * p.smooth;
}

}  // namespace evfi
