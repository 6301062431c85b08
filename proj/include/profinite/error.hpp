// Error type shared by every module. Codes are module-qualified,
// e.g. "mekler.NotNice" or "lattice.DepthInsufficient".

#ifndef PROFINITE_ERROR_HPP_
#define PROFINITE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace profinite {

class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
  throw Error(code, msg);
}

// Orders above this are never stored as dense multiplication tables.
inline constexpr std::size_t kMaxTabulatedOrder = 2500;
// Implicit direct products may go further, since nothing is tabulated.
inline constexpr std::size_t kMaxProductOrder = 20000;
// Generated groups beyond the tabulation bound are kept as Cayley graphs.
inline constexpr std::size_t kMaxGeneratedOrder = 250000;

} // namespace profinite

#endif
