#include "core/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ccecr {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

int64_t min3(int64_t a, int64_t b, int64_t c) { return std::min(a, std::min(b, c)); }
}  // namespace

double order_mean(const OrderPair& od, int64_t day) {
  double s = 1.0;
  for (const auto& per : od.periods) {
    s += per.amplitude * std::sin(kTwoPi * static_cast<double>(day) / per.period_days + per.phase);
  }
  return std::max(0.0, od.base_volume * s);
}

std::vector<int64_t> sample_orders(const TopoIndex& idx, int64_t day, Rng& rng) {
  const auto& pairs = idx.topo().order_model.pairs;
  std::vector<int64_t> out(pairs.size(), 0);
  for (size_t k = 0; k < pairs.size(); ++k) {
    // Noise is drawn unconditionally so the stream does not depend on the
    // mean being zero.
    double noise = pairs[k].noise_cv > 0.0 ? rng.positive_noise(pairs[k].noise_cv) : 1.0;
    out[k] = std::max<int64_t>(0, std::llround(order_mean(pairs[k], day) * noise));
  }
  return out;
}

int64_t sample_travel_time(const VesselSpec& v, double leg_days, Rng& rng) {
  double m = 1.0;
  double sigma = v.speed_noise.sigma;
  if (sigma > 0.0) m = rng.uniform(1.0 - sigma, 1.0 + sigma);
  return std::max<int64_t>(1, std::llround(leg_days * m));
}

Simulator::Simulator(const TopoIndex& idx, const FleetConfiguration& p, std::uint64_t seed,
                     double gamma)
    : idx_(&idx), rng_(seed), gamma_(gamma), horizon_(idx.topo().horizon) {
  const int np = idx.num_ports();
  stock_.resize(np);
  for (int h = 0; h < np; ++h) stock_[h] = idx.topo().ports[h].initial_stock;
  waiting_.assign(np, std::vector<int64_t>(np, 0));
  day_demand_.assign(np, 0);
  day_fulfilled_.assign(np, 0);
  day_shortage_.assign(np, 0);

  auto resolved = resolve_configuration(idx, p);
  vessels_.resize(resolved.size());
  std::vector<int> routes(resolved.size());
  for (size_t v = 0; v < resolved.size(); ++v) {
    vessels_[v].route = resolved[v].route;
    vessels_[v].stop_pos = resolved[v].start_stop_pos;
    vessels_[v].arrival_day = 0;
    vessels_[v].laden.assign(np, 0);
    routes[v] = resolved[v].route;
  }
  pair_servable_ = servable_pairs(idx, routes);
}

void Simulator::start_day() {
  const Topology& t = idx_->topo();
  const auto& pairs = t.order_model.pairs;
  std::fill(day_demand_.begin(), day_demand_.end(), 0);
  std::fill(day_fulfilled_.begin(), day_fulfilled_.end(), 0);
  std::fill(day_shortage_.begin(), day_shortage_.end(), 0);

  // Orders, served greedily in pair order from the start-of-day stock.
  // Pairs no deployed vessel can carry are refused outright; the demand
  // still counts, the stock stays put.
  std::vector<int64_t> q = sample_orders(*idx_, day_, rng_);
  for (size_t k = 0; k < pairs.size(); ++k) {
    auto [o, d] = idx_->pair_ports()[k];
    int64_t served = pair_servable_[k] ? std::min(q[k], stock_[o]) : 0;
    stock_[o] -= served;
    waiting_[o][d] += served;
    day_demand_[o] += q[k];
    day_fulfilled_[o] += served;
    day_shortage_[o] += q[k] - served;
    metrics_.total_demand += q[k];
    metrics_.total_shortage += q[k] - served;
    cum_shortage_ += q[k] - served;
  }

  mature_pool();

  arrivals_today_.clear();
  for (int v = 0; v < static_cast<int>(vessels_.size()); ++v) {
    if (vessels_[v].arrival_day == day_) arrivals_today_.push_back(v);
  }
  std::sort(arrivals_today_.begin(), arrivals_today_.end(), [this](int a, int b) {
    int pa = idx_->route_stops(vessels_[a].route)[vessels_[a].stop_pos];
    int pb = idx_->route_stops(vessels_[b].route)[vessels_[b].stop_pos];
    return pa != pb ? pa < pb : a < b;
  });
  arrival_cursor_ = 0;
  day_open_ = true;
}

void Simulator::mature_pool() {
  for (auto& e : pool_) {
    if (e.mature_day > day_ || e.qty == 0) continue;
    int64_t room = idx_->topo().ports[e.port].capacity - stock_[e.port];
    int64_t take = std::min(e.qty, room);
    stock_[e.port] += take;
    e.qty -= take;  // leftover is retried next day (port was full)
  }
  std::erase_if(pool_, [](const PoolEntry& e) { return e.qty == 0; });
}

void Simulator::record_epoch_reward(int64_t epoch_day) {
  double r = -static_cast<double>(cum_shortage_ - shortage_at_last_epoch_);
  metrics_.discounted_return += std::pow(gamma_, static_cast<double>(epoch_day)) * r;
  shortage_at_last_epoch_ = cum_shortage_;
}

std::optional<DecisionPoint> Simulator::next_decision() {
  if (decision_pending_) throw Error("next_decision called with an unanswered decision");
  while (!finished_) {
    if (!day_open_) {
      if (day_ >= horizon_) {
        record_epoch_reward(horizon_);
        metrics_.fulfillment_pct =
            metrics_.total_demand == 0
                ? 100.0
                : 100.0 * (1.0 - static_cast<double>(metrics_.total_shortage) /
                                     static_cast<double>(metrics_.total_demand));
        metrics_.shortage_by_port_day.clear();
        for (const auto& row : hist_shortage_)
          metrics_.shortage_by_port_day.insert(metrics_.shortage_by_port_day.end(), row.begin(),
                                               row.end());
        finished_ = true;
        return std::nullopt;
      }
      start_day();
    }
    if (arrival_cursor_ < arrivals_today_.size()) {
      int v = arrivals_today_[arrival_cursor_];
      VesselState& vs = vessels_[v];
      int port = idx_->route_stops(vs.route)[vs.stop_pos];

      // Destination laden comes off before the decision is surfaced.
      if (vs.laden[port] > 0) {
        pool_.push_back({port, day_ + idx_->topo().empty_return_delay, vs.laden[port]});
        vs.laden_total -= vs.laden[port];
        vs.laden[port] = 0;
      }

      DecisionPoint d;
      d.vessel = v;
      d.port = port;
      d.day = day_;
      d.ticket = next_ticket_++;
      Observation& o = d.obs;
      o.port_stock = stock_[port];
      o.port_capacity = idx_->topo().ports[port].capacity;
      o.handling_cap = idx_->handling_cap(port);
      o.vessel_empties = vs.empties;
      o.vessel_free = idx_->topo().vessels[v].capacity - vs.empties - vs.laden_total;
      o.day = day_;
      o.horizon = horizon_;
      double dem = day_demand_[port], sh = day_shortage_[port];
      for (int64_t b = std::max<int64_t>(0, day_ - (kObsWindow - 1)); b < day_; ++b) {
        dem += static_cast<double>(hist_demand_[b][port]);
        sh += static_cast<double>(hist_shortage_[b][port]);
      }
      o.recent_demand = dem;
      o.recent_shortage = sh;

      record_epoch_reward(day_);
      metrics_.num_decisions++;
      decision_pending_ = true;
      return d;
    }
    // Day complete.
    if (trace_) {
      for (int h = 0; h < idx_->num_ports(); ++h) {
        trace_->push_back({day_, h, stock_[h], day_demand_[h], day_fulfilled_[h],
                           day_shortage_[h]});
      }
    }
    hist_demand_.push_back(day_demand_);
    hist_shortage_.push_back(day_shortage_);
    day_open_ = false;
    day_++;
  }
  return std::nullopt;
}

int64_t Simulator::apply_action(const DecisionPoint& d, RepositionAction a) {
  if (!decision_pending_ || d.ticket + 1 != next_ticket_)
    throw Error("apply_action: stale or mismatched decision");
  int v = d.vessel;
  VesselState& vs = vessels_[v];
  int port = d.port;
  int64_t cap_v = idx_->topo().vessels[v].capacity;
  int64_t hcap = idx_->handling_cap(port);

  int64_t lo = -min3(vs.empties, idx_->topo().ports[port].capacity - stock_[port], hcap);
  int64_t hi = min3(stock_[port], cap_v - vs.empties - vs.laden_total, hcap);
  int64_t applied = std::clamp(a.delta, lo, hi);
  stock_[port] -= applied;
  vs.empties += applied;

  finish_arrival(v);
  decision_pending_ = false;
  arrival_cursor_++;
  return applied;
}

void Simulator::finish_arrival(int v) {
  VesselState& vs = vessels_[v];
  const Route& route = idx_->topo().routes[vs.route];
  int port = idx_->route_stops(vs.route)[vs.stop_pos];
  int64_t cap_v = idx_->topo().vessels[v].capacity;

  // Waiting laden for destinations this route serves, destination index order.
  for (int d = 0; d < idx_->num_ports(); ++d) {
    if (d == port || !idx_->route_contains(vs.route, d)) continue;
    int64_t space = cap_v - vs.empties - vs.laden_total;
    if (space <= 0) break;
    int64_t take = std::min(waiting_[port][d], space);
    if (take > 0) {
      waiting_[port][d] -= take;
      vs.laden[d] += take;
      vs.laden_total += take;
    }
  }

  int64_t travel =
      sample_travel_time(idx_->topo().vessels[v], route.leg_distances[vs.stop_pos], rng_);
  vs.arrival_day = day_ + travel;
  vs.stop_pos = (vs.stop_pos + 1) % static_cast<int>(route.stops.size());
}

PlanningSnapshot Simulator::snapshot() const {
  PlanningSnapshot s;
  s.day = day_;
  s.mid_day = day_open_;
  s.stock = stock_;
  s.pool = pool_;
  s.waiting_laden = waiting_;
  s.vessels.resize(vessels_.size());
  for (size_t v = 0; v < vessels_.size(); ++v) {
    s.vessels[v].route = vessels_[v].route;
    s.vessels[v].next_stop_pos = vessels_[v].stop_pos;
    s.vessels[v].next_arrival_day = vessels_[v].arrival_day;
    s.vessels[v].empties = vessels_[v].empties;
    s.vessels[v].laden_by_dest = vessels_[v].laden;
  }
  return s;
}

int64_t Simulator::container_total() const {
  int64_t total = std::accumulate(stock_.begin(), stock_.end(), int64_t{0});
  for (const auto& vs : vessels_) total += vs.empties + vs.laden_total;
  for (const auto& e : pool_) total += e.qty;
  for (const auto& row : waiting_)
    total += std::accumulate(row.begin(), row.end(), int64_t{0});
  return total;
}

EpisodeMetrics rollout(const TopoIndex& idx, const FleetConfiguration& p, Policy& policy,
                       std::uint64_t seed, double gamma, std::vector<TraceRow>* trace) {
  Simulator sim(idx, p, derive_seed(seed, 1), gamma);
  if (trace) sim.enable_trace(trace);
  Rng policy_rng(derive_seed(seed, 2));
  policy.begin_episode(sim);
  while (auto d = sim.next_decision()) {
    RepositionAction a = policy.act(sim, *d, policy_rng);
    int64_t applied = sim.apply_action(*d, a);
    policy.on_applied(*d, a.delta, applied);
  }
  return sim.metrics();
}

std::string trace_to_csv(const TopoIndex& idx, const std::vector<TraceRow>& rows) {
  std::ostringstream out;
  out << "day,port,stock,demand,fulfilled,shortage\n";
  for (const auto& r : rows) {
    out << r.day << ',' << idx.topo().ports[r.port].id << ',' << r.stock << ',' << r.demand << ','
        << r.fulfilled << ',' << r.shortage << '\n';
  }
  return out.str();
}

}  // namespace ccecr
