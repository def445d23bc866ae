#include "aam/training/early_stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace aam::training {

EarlyStopping::EarlyStopping(int patience) : patience_(patience) {
  if (patience < 1) throw std::invalid_argument("EarlyStopping: patience must be >= 1");
}

bool EarlyStopping::observe(int epoch, double val_loss) {
  if (best_epoch_ == 0 || (std::isfinite(val_loss) && val_loss < best_loss_)) {
    best_epoch_ = epoch;
    best_loss_ = val_loss;
    return true;
  }
  return false;
}

}  // namespace aam::training
