#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace aam {

using WarningSink = std::function<void(std::string_view)>;

// Emits a warning through the installed sink (stderr by default).
void warn(std::string_view message);

// Installs a new sink and returns the previous one. Thread-safe.
WarningSink set_warning_sink(WarningSink sink);

// Collects warnings for the lifetime of the object; restores the previous sink on exit.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
  WarningSink previous_;
};

}  // namespace aam
