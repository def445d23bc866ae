#pragma once

#include <limits>

namespace aam::training {

// Tracks the best (strictly lowest) validation loss over 1-based epochs.
// Training should stop once `patience` epochs pass without improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience);

  // Returns true if `val_loss` strictly improves on the best seen so far.
  bool observe(int epoch, double val_loss);

  bool should_stop(int epoch) const { return best_epoch_ > 0 && epoch - best_epoch_ >= patience_; }

  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }
  int patience() const { return patience_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

}  // namespace aam::training
