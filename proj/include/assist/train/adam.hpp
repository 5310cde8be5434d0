#pragma once

#include "assist/dae/params.hpp"

namespace assist::train {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over every tensor of a ModelParams.
class Adam {
 public:
  explicit Adam(const dae::ModelDims& dims, AdamConfig config = {});

  void step(dae::ModelParams& params, const dae::ModelParams& grad, double lr);
  long steps() const { return t_; }

 private:
  AdamConfig config_;
  dae::ModelParams m_;
  dae::ModelParams v_;
  long t_ = 0;
};

}  // namespace assist::train
