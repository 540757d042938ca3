#include "nibble/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nibble {
namespace {

EnvelopeCheck check(std::span<const double> values, double lo, double hi) {
  EnvelopeCheck out;
  out.lo = lo;
  out.hi = hi;
  out.samples = values.size();
  if (values.empty()) return out;
  out.observed_min = std::numeric_limits<double>::infinity();
  out.observed_max = -std::numeric_limits<double>::infinity();
  for (double x : values) {
    if (x >= lo && x <= hi) ++out.inside;
    out.observed_min = std::min(out.observed_min, x);
    out.observed_max = std::max(out.observed_max, x);
  }
  return out;
}

void merge(EnvelopeCheck& into, const EnvelopeCheck& other) {
  if (other.samples == 0) return;
  if (into.samples == 0) {
    into.observed_min = other.observed_min;
    into.observed_max = other.observed_max;
  } else {
    into.observed_min = std::min(into.observed_min, other.observed_min);
    into.observed_max = std::max(into.observed_max, other.observed_max);
  }
  into.samples += other.samples;
  into.inside += other.inside;
}

template <class F>
double min_over(const EventReport& r, F get) {
  double worst = 1.0;
  for (const RoundEventReport& round : r.rounds) worst = std::min(worst, get(round));
  return worst;
}

}  // namespace

double EventReport::min_palette_fraction() const {
  return min_over(*this, [](const RoundEventReport& r) { return r.palette.pass_fraction(); });
}

double EventReport::min_c_degree_fraction() const {
  return min_over(*this, [](const RoundEventReport& r) { return r.c_degree.pass_fraction(); });
}

double EventReport::min_sampled_fraction() const {
  return min_over(*this, [](const RoundEventReport& r) {
    return std::min(r.node_sampled.pass_fraction(), r.color_sampled.pass_fraction());
  });
}

bool EventReport::failed_degrees_ok() const {
  return std::all_of(rounds.begin(), rounds.end(), [](const RoundEventReport& r) { return r.failed_degree_ok; });
}

EventReport verify_events(std::span<const RoundTrace> trace, const Params& params, const EventTolerance& tolerance,
                          unsigned max_round) {
  EventReport report;
  const double eps = params.epsilon;
  const double s = tolerance.slack;
  const double delta = static_cast<double>(params.delta);
  const double n = static_cast<double>(std::max<std::size_t>(params.n, 2));
  const double frac_lo = (eps - eps * eps) * (1.0 - s);
  const double frac_hi = (eps + eps * eps) * (1.0 + s);
  for (const RoundTrace& t : trace) {
    if (max_round != 0 && t.round > max_round) break;
    RoundEventReport r;
    r.round = t.round;
    r.center = params.envelope_center(t.round);
    r.gamma = params.gamma_at(t.round) * tolerance.gamma_scale;
    const double lo = r.center * (1.0 - r.gamma) * (1.0 - s);
    const double hi = r.center * (1.0 + r.gamma) * (1.0 + s);
    r.palette = check(t.palette_sizes, lo, hi);
    r.c_degree = check(t.c_degrees, lo, hi);
    r.node_sampled = check(t.node_sample_fractions, frac_lo, frac_hi);
    r.color_sampled = check(t.color_sample_fractions, frac_lo, frac_hi);
    r.failed_max_degree = t.failed_max_degree;
    r.failed_degree_bound = 9.0 * eps * eps * delta + 3.0 * std::sqrt(delta * std::log(n));
    r.failed_degree_ok = static_cast<double>(t.failed_max_degree) <= r.failed_degree_bound;
    report.rounds.push_back(r);
  }
  return report;
}

void merge_event_reports(EventReport& into, const EventReport& other) {
  if (into.rounds.empty()) {
    into = other;
    return;
  }
  for (std::size_t i = 0; i < std::min(into.rounds.size(), other.rounds.size()); ++i) {
    RoundEventReport& a = into.rounds[i];
    const RoundEventReport& b = other.rounds[i];
    merge(a.palette, b.palette);
    merge(a.c_degree, b.c_degree);
    merge(a.node_sampled, b.node_sampled);
    merge(a.color_sampled, b.color_sampled);
    a.failed_max_degree = std::max(a.failed_max_degree, b.failed_max_degree);
    a.failed_degree_ok = a.failed_degree_ok && b.failed_degree_ok;
  }
}

Pmf empirical_pmf(std::span<const Outcome> samples) {
  Pmf pmf;
  if (samples.empty()) return pmf;
  const double w = 1.0 / static_cast<double>(samples.size());
  for (const Outcome& o : samples) pmf[o] += w;
  return pmf;
}

namespace {

double half_l1(const Pmf& a, const Pmf& b) {
  double sum = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      sum += ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      sum += ib->second;
      ++ib;
    } else {
      sum += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return std::min(1.0, sum / 2.0);
}

}  // namespace

TvResult tv_distance(std::span<const Outcome> a, std::span<const Outcome> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kEmptySamples, "tv_distance needs samples on both sides");
  return {half_l1(empirical_pmf(a), empirical_pmf(b)), a.size(), b.size()};
}

TvResult tv_distance(std::span<const Outcome> samples, const Pmf& exact) {
  if (samples.empty() || exact.empty()) throw Error(ErrorCode::kEmptySamples, "tv_distance needs samples");
  return {half_l1(empirical_pmf(samples), exact), samples.size(), 0};
}

std::vector<Outcome> marginal(std::span<const Outcome> samples, std::size_t k) {
  std::vector<Outcome> out;
  out.reserve(samples.size());
  for (const Outcome& o : samples) out.push_back({o.at(k)});
  return out;
}

Pmf marginal(const Pmf& pmf, std::size_t k) {
  Pmf out;
  for (const auto& [o, p] : pmf) out[{o.at(k)}] += p;
  return out;
}

}  // namespace nibble
