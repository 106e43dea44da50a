#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relaxrk {

/// Explicit Runge-Kutta method given by its Butcher tableau (c | A ; b),
/// optionally with an embedded weight vector for error estimation.
class ButcherTableau {
 public:
  /// Validates explicitness, row sums and weight sums; throws ConfigError.
  ButcherTableau(std::string name, int order, std::vector<std::vector<double>> A,
                 std::vector<double> b, std::vector<double> c,
                 std::optional<std::vector<double>> b_embedded = std::nullopt,
                 std::optional<int> order_embedded = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  int stages() const noexcept { return static_cast<int>(b_.size()); }
  int order() const noexcept { return order_; }
  double a(int i, int j) const { return A_[i][j]; }
  const std::vector<std::vector<double>>& A() const noexcept { return A_; }
  const std::vector<double>& b() const noexcept { return b_; }
  const std::vector<double>& c() const noexcept { return c_; }
  const std::optional<std::vector<double>>& b_embedded() const noexcept { return b_embedded_; }
  std::optional<int> order_embedded() const noexcept { return order_embedded_; }
  bool has_embedded() const noexcept { return b_embedded_.has_value(); }
  bool nonnegative_weights() const noexcept { return nonnegative_weights_; }

 private:
  std::string name_;
  int order_;
  std::vector<std::vector<double>> A_;
  std::vector<double> b_;
  std::vector<double> c_;
  std::optional<std::vector<double>> b_embedded_;
  std::optional<int> order_embedded_;
  bool nonnegative_weights_;
};

/// BSRK43, RK44, BSRK85 or VRK96. Unknown names raise ConfigError listing the valid ones.
const ButcherTableau& builtin_tableau(std::string_view name);

std::vector<std::string> builtin_tableau_names();

/// Maximum |Phi(t) - 1/density(t)| over all rooted trees with at most `order`
/// vertices, using the main weights (or the embedded weights when requested).
/// Valid for 1 <= order <= 6.
double check_order_conditions(const ButcherTableau& tab, int order, bool use_embedded = false);

/// Number of rooted trees with exactly `order` vertices (1, 1, 2, 4, 9, 20).
std::size_t rooted_tree_count(int order);

inline bool has_nonnegative_weights(const ButcherTableau& tab) { return tab.nonnegative_weights(); }

}  // namespace relaxrk
