#include "core/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "core/domain.hpp"

namespace ccecr {

void Linear::init(ParamBank& bank, int in_dim, int out_dim, Rng& rng) {
  in = in_dim;
  out = out_dim;
  w = bank.alloc(in * out);
  b = bank.alloc(out);
  const double limit = std::sqrt(6.0 / (in + out));
  for (int k = 0; k < in * out; ++k) bank.params[w + k] = rng.uniform(-limit, limit);
}

void Linear::forward(const ParamBank& bank, const double* x, double* y) const {
  const double* wp = bank.params.data() + w;
  const double* bp = bank.params.data() + b;
  for (int i = 0; i < out; ++i) {
    double acc = bp[i];
    const double* row = wp + static_cast<std::size_t>(i) * in;
    for (int j = 0; j < in; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void Linear::backward(ParamBank& bank, const double* x, const double* dy, double* dx) const {
  const double* wp = bank.params.data() + w;
  double* gw = bank.grads.data() + w;
  double* gb = bank.grads.data() + b;
  for (int i = 0; i < out; ++i) {
    const double g = dy[i];
    gb[i] += g;
    double* grow = gw + static_cast<std::size_t>(i) * in;
    for (int j = 0; j < in; ++j) grow[j] += g * x[j];
  }
  if (dx != nullptr) {
    for (int j = 0; j < in; ++j) {
      double acc = 0.0;
      for (int i = 0; i < out; ++i) acc += wp[static_cast<std::size_t>(i) * in + j] * dy[i];
      dx[j] += acc;
    }
  }
}

void Mlp::init(ParamBank& bank, int in, int hidden, int out, bool bounded, Rng& rng) {
  bounded_out = bounded;
  l1.init(bank, in, hidden, rng);
  l2.init(bank, hidden, out, rng);
}

void Mlp::forward(const ParamBank& bank, const double* x, Cache& c) const {
  c.x.assign(x, x + l1.in);
  c.h.resize(l1.out);
  c.y.resize(l2.out);
  l1.forward(bank, x, c.h.data());
  for (double& v : c.h) v = std::tanh(v);
  l2.forward(bank, c.h.data(), c.y.data());
  if (bounded_out) {
    for (double& v : c.y) v = std::tanh(v);
  }
}

void Mlp::backward(ParamBank& bank, const Cache& c, const double* dy, double* dx) const {
  std::vector<double> dz(c.y.size());
  if (bounded_out) {
    for (std::size_t i = 0; i < c.y.size(); ++i) dz[i] = dy[i] * (1.0 - c.y[i] * c.y[i]);
  } else {
    dz.assign(dy, dy + c.y.size());
  }
  std::vector<double> dh(c.h.size(), 0.0);
  l2.backward(bank, c.h.data(), dz.data(), dh.data());
  for (std::size_t i = 0; i < c.h.size(); ++i) dh[i] *= 1.0 - c.h[i] * c.h[i];
  l1.backward(bank, c.x.data(), dh.data(), dx);
}

Adam::Adam(int n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::vector<double>& params, const std::vector<double>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw Error("adam: parameter/gradient size mismatch");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1_ * m_[i] + (1.0 - b1_) * grads[i];
    v_[i] = b2_ * v_[i] + (1.0 - b2_) * grads[i] * grads[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

void masked_softmax(const std::vector<double>& logits, const std::vector<std::uint8_t>& mask,
                    std::vector<double>& probs) {
  probs.assign(logits.size(), 0.0);
  double max_z = -1e300;
  bool any = false;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i] != 0) {
      max_z = std::max(max_z, logits[i]);
      any = true;
    }
  }
  if (!any) throw Error("masked_softmax: all entries masked");
  double denom = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i] != 0) {
      probs[i] = std::exp(logits[i] - max_z);
      denom += probs[i];
    }
  }
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i] != 0) probs[i] /= denom;
  }
}

double probs_entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

void entropy_backward(const std::vector<double>& probs, double entropy, double coef,
                      std::vector<double>& dlogits) {
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) dlogits[i] += coef * -probs[i] * (std::log(probs[i]) + entropy);
  }
}

void logprob_backward(const std::vector<double>& probs, int chosen, double coef,
                      std::vector<double>& dlogits) {
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double indicator = static_cast<int>(i) == chosen ? 1.0 : 0.0;
    if (probs[i] > 0.0 || static_cast<int>(i) == chosen) {
      dlogits[i] += coef * (indicator - probs[i]);
    }
  }
}

}  // namespace ccecr
