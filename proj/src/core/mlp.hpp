#ifndef CCECR_CORE_MLP_HPP
#define CCECR_CORE_MLP_HPP

#include <cstdint>
#include <vector>

#include "core/rng.hpp"

namespace ccecr {

// One contiguous parameter vector with a parallel gradient buffer. Models
// carve their layers out of a shared bank, so optimizers and finite
// difference checks see the whole model as a single flat vector.
struct ParamBank {
  std::vector<double> params;
  std::vector<double> grads;

  int alloc(int n) {
    const int off = static_cast<int>(params.size());
    params.resize(params.size() + n, 0.0);
    grads.resize(params.size(), 0.0);
    return off;
  }
  void zero_grads() { std::fill(grads.begin(), grads.end(), 0.0); }
  int size() const { return static_cast<int>(params.size()); }
};

// y = W x + b with W row-major [out][in], stored in a ParamBank.
struct Linear {
  int in = 0;
  int out = 0;
  int w = 0;  // bank offset of W
  int b = 0;  // bank offset of b

  // Xavier-uniform weights, zero bias.
  void init(ParamBank& bank, int in_dim, int out_dim, Rng& rng);
  void forward(const ParamBank& bank, const double* x, double* y) const;
  // dy = d(objective)/dy. Accumulates parameter gradients into bank.grads
  // and input gradients into dx (skipped when dx is null).
  void backward(ParamBank& bank, const double* x, const double* dy, double* dx) const;
};

// Two-layer feed-forward map: tanh hidden layer, output linear for logit
// heads or tanh for bounded embeddings.
struct Mlp {
  Linear l1, l2;
  bool bounded_out = false;

  struct Cache {
    std::vector<double> x, h, y;  // input, hidden post-tanh, output
  };

  void init(ParamBank& bank, int in, int hidden, int out, bool bounded, Rng& rng);
  void forward(const ParamBank& bank, const double* x, Cache& c) const;
  // dy = d(objective)/d(c.y); accumulates into bank.grads and dx (nullable).
  void backward(ParamBank& bank, const Cache& c, const double* dy, double* dx) const;
};

// Adam with bias correction; step() consumes the gradient buffer as-is.
class Adam {
 public:
  Adam(int n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(std::vector<double>& params, const std::vector<double>& grads);

 private:
  double lr_, b1_, b2_, eps_;
  std::int64_t t_ = 0;
  std::vector<double> m_, v_;
};

// Softmax restricted to unmasked entries; masked probabilities are exactly
// zero, never a small residual. Throws if everything is masked.
void masked_softmax(const std::vector<double>& logits, const std::vector<std::uint8_t>& mask,
                    std::vector<double>& probs);

double probs_entropy(const std::vector<double>& probs);  // -sum p ln p over p > 0

// Accumulates coef * d(entropy)/d(logit) = coef * -p_j (ln p_j + H).
// Masked entries (p = 0) receive no gradient.
void entropy_backward(const std::vector<double>& probs, double entropy, double coef,
                      std::vector<double>& dlogits);

// Accumulates coef * d(log p_chosen)/d(logit) = coef * ([j == chosen] - p_j).
void logprob_backward(const std::vector<double>& probs, int chosen, double coef,
                      std::vector<double>& dlogits);

}  // namespace ccecr

#endif  // CCECR_CORE_MLP_HPP
