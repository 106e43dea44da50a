#include "relaxrk/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>

#include "relaxrk/errors.hpp"

namespace relaxrk {

namespace {

constexpr double kTableauTol = 1e-14;

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

ButcherTableau::ButcherTableau(std::string name, int order, std::vector<std::vector<double>> A,
                               std::vector<double> b, std::vector<double> c,
                               std::optional<std::vector<double>> b_embedded,
                               std::optional<int> order_embedded)
    : name_(std::move(name)),
      order_(order),
      A_(std::move(A)),
      b_(std::move(b)),
      c_(std::move(c)),
      b_embedded_(std::move(b_embedded)),
      order_embedded_(order_embedded) {
  const std::size_t s = b_.size();
  if (s == 0) throw ConfigError("tableau " + name_ + ": no stages");
  if (A_.size() != s || c_.size() != s) throw ConfigError("tableau " + name_ + ": inconsistent sizes");
  for (std::size_t i = 0; i < s; ++i) {
    if (A_[i].size() != s) throw ConfigError("tableau " + name_ + ": A is not square");
    for (std::size_t j = i; j < s; ++j) {
      if (A_[i][j] != 0.0) throw ConfigError("tableau " + name_ + ": A is not strictly lower triangular");
    }
    if (std::abs(c_[i] - sum(A_[i])) > kTableauTol) {
      throw ConfigError("tableau " + name_ + ": row-sum condition violated in row " + std::to_string(i));
    }
  }
  if (std::abs(sum(b_) - 1.0) > kTableauTol) throw ConfigError("tableau " + name_ + ": weights do not sum to 1");
  if (b_embedded_) {
    if (b_embedded_->size() != s) throw ConfigError("tableau " + name_ + ": embedded weights have wrong size");
    if (std::abs(sum(*b_embedded_) - 1.0) > kTableauTol) {
      throw ConfigError("tableau " + name_ + ": embedded weights do not sum to 1");
    }
  }
  if (order_ < 1) throw ConfigError("tableau " + name_ + ": order must be positive");
  nonnegative_weights_ = *std::min_element(b_.begin(), b_.end()) >= 0.0;
}

namespace {

// Coefficients as registered in PETSc's TSRK implementation (rk.c), which
// transcribes Bogacki-Shampine (1989, 1996) and Verner's RKV65.IIIXb robust set.
ButcherTableau make_bsrk43() {
  return ButcherTableau("BSRK43", 3,
                        {{0, 0, 0, 0},
                         {1.0 / 2.0, 0, 0, 0},
                         {0, 3.0 / 4.0, 0, 0},
                         {2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0, 0}},
                        {2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0, 0}, {0, 1.0 / 2.0, 3.0 / 4.0, 1.0},
                        std::vector<double>{7.0 / 24.0, 1.0 / 4.0, 1.0 / 3.0, 1.0 / 8.0}, 2);
}

ButcherTableau make_rk44() {
  return ButcherTableau("RK44", 4, {{0, 0, 0, 0}, {0.5, 0, 0, 0}, {0, 0.5, 0, 0}, {0, 0, 1.0, 0}},
                        {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0}, {0, 0.5, 0.5, 1.0});
}

ButcherTableau make_bsrk85() {
  return ButcherTableau(
      "BSRK85", 5,
      {{0, 0, 0, 0, 0, 0, 0, 0},
       {1.0 / 6.0, 0, 0, 0, 0, 0, 0, 0},
       {2.0 / 27.0, 4.0 / 27.0, 0, 0, 0, 0, 0, 0},
       {183.0 / 1372.0, -162.0 / 343.0, 1053.0 / 1372.0, 0, 0, 0, 0, 0},
       {68.0 / 297.0, -4.0 / 11.0, 42.0 / 143.0, 1960.0 / 3861.0, 0, 0, 0, 0},
       {597.0 / 22528.0, 81.0 / 352.0, 63099.0 / 585728.0, 58653.0 / 366080.0, 4617.0 / 20480.0, 0, 0, 0},
       {174197.0 / 959244.0, -30942.0 / 79937.0, 8152137.0 / 19744439.0, 666106.0 / 1039181.0,
        -29421.0 / 29068.0, 482048.0 / 414219.0, 0, 0},
       {587.0 / 8064.0, 0, 4440339.0 / 15491840.0, 24353.0 / 124800.0, 387.0 / 44800.0, 2152.0 / 5985.0,
        7267.0 / 94080.0, 0}},
      {587.0 / 8064.0, 0, 4440339.0 / 15491840.0, 24353.0 / 124800.0, 387.0 / 44800.0, 2152.0 / 5985.0,
       7267.0 / 94080.0, 0},
      {0, 1.0 / 6.0, 2.0 / 9.0, 3.0 / 7.0, 2.0 / 3.0, 3.0 / 4.0, 1.0, 1.0},
      std::vector<double>{2479.0 / 34992.0, 0, 123.0 / 416.0, 612941.0 / 3411720.0, 43.0 / 1440.0,
                          2272.0 / 6561.0, 79937.0 / 1113912.0, 3293.0 / 556956.0},
      4);
}

ButcherTableau make_vrk96() {
  const std::vector<double> b = {7.6388888888888888888888888888888888888889e-02,
                                 0,
                                 0,
                                 3.6940836940836940836940836940836940836941e-01,
                                 0,
                                 2.4801587301587301587301587301587301587302e-01,
                                 2.3674242424242424242424242424242424242424e-01,
                                 6.9444444444444444444444444444444444444444e-02,
                                 0};
  return ButcherTableau(
      "VRK96", 6,
      {{0, 0, 0, 0, 0, 0, 0, 0, 0},
       {1.8000000000000000000000000000000000000000e-01, 0, 0, 0, 0, 0, 0, 0, 0},
       {8.9506172839506172839506172839506172839506e-02, 7.7160493827160493827160493827160493827160e-02, 0, 0,
        0, 0, 0, 0, 0},
       {6.2500000000000000000000000000000000000000e-02, 0, 1.8750000000000000000000000000000000000000e-01, 0,
        0, 0, 0, 0, 0},
       {3.1651600000000000000000000000000000000000e-01, 0, -1.0449480000000000000000000000000000000000e+00,
        1.2584320000000000000000000000000000000000e+00, 0, 0, 0, 0, 0},
       {2.7232612736485626257225065566674305502508e-01, 0, -8.2513360323886639676113360323886639676113e-01,
        1.0480917678812415654520917678812415654521e+00, 1.0471570799276856873679117969088177628396e-01, 0, 0,
        0, 0},
       {-1.6699418599716514314329607278961797333198e-01, 0, 6.3170850202429149797570850202429149797571e-01,
        1.7461044552773876082146758838488161796432e-01, -1.0665356459086066122525194734018680677781e+00,
        1.2272108843537414965986394557823129251701e+00, 0, 0, 0},
       {3.6423751686909581646423751686909581646424e-01, 0, -2.0404858299595141700404858299595141700405e-01,
        -3.4883737816068643136312309244640071707741e-01, 3.2619323032856867443333608747142581729048e+00,
        -2.7551020408163265306122448979591836734694e+00, 6.8181818181818181818181818181818181818182e-01, 0,
        0},
       b},
      b, {0, 9.0 / 50.0, 1.0 / 6.0, 1.0 / 4.0, 53.0 / 100.0, 3.0 / 5.0, 4.0 / 5.0, 1.0, 1.0},
      std::vector<double>{5.8700209643605870020964360587002096436059e-02, 0, 0,
                          4.8072562358276643990929705215419501133787e-01,
                          -8.5341242076919085578832094861228313083563e-01,
                          1.2046485260770975056689342403628117913832e+00, 0,
                          -5.9242373072160306202859394348756050883710e-02,
                          1.6858043453788134639198468985703028256220e-01},
      5);
}

const std::map<std::string, ButcherTableau, std::less<>>& registry() {
  static const std::map<std::string, ButcherTableau, std::less<>> tableaus = [] {
    std::map<std::string, ButcherTableau, std::less<>> m;
    for (auto&& t : {make_bsrk43(), make_rk44(), make_bsrk85(), make_vrk96()}) m.emplace(t.name(), t);
    return m;
  }();
  return tableaus;
}

struct RootedTree {
  int order;
  std::vector<int> children;  // indices into the tree list, non-decreasing
};

// All rooted trees with at most max_order vertices, ordered by vertex count.
const std::vector<RootedTree>& rooted_trees(int max_order) {
  static std::map<int, std::vector<RootedTree>> cache;
  static std::mutex lock;
  std::lock_guard guard(lock);
  auto it = cache.find(max_order);
  if (it != cache.end()) return it->second;

  std::vector<RootedTree> trees{{1, {}}};
  for (int n = 2; n <= max_order; ++n) {
    const int available = static_cast<int>(trees.size());
    std::vector<int> current;
    std::vector<RootedTree> generated;
    std::function<void(int, int)> grow = [&](int remaining, int min_id) {
      if (remaining == 0) {
        generated.push_back({n, current});
        return;
      }
      for (int id = min_id; id < available; ++id) {
        if (trees[id].order > remaining) break;
        current.push_back(id);
        grow(remaining - trees[id].order, id);
        current.pop_back();
      }
    };
    grow(n - 1, 0);
    trees.insert(trees.end(), generated.begin(), generated.end());
  }
  return cache.emplace(max_order, std::move(trees)).first->second;
}

}  // namespace

const ButcherTableau& builtin_tableau(std::string_view name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    std::string valid;
    for (const auto& [key, _] : reg) valid += (valid.empty() ? "" : ", ") + key;
    throw ConfigError("unknown tableau '" + std::string(name) + "'; valid names: " + valid);
  }
  return it->second;
}

std::vector<std::string> builtin_tableau_names() {
  std::vector<std::string> names;
  for (const auto& [key, _] : registry()) names.push_back(key);
  return names;
}

std::size_t rooted_tree_count(int order) {
  if (order < 1 || order > 6) throw ConfigError("rooted trees are enumerated for orders 1..6");
  const auto& trees = rooted_trees(order);
  return static_cast<std::size_t>(
      std::count_if(trees.begin(), trees.end(), [&](const RootedTree& t) { return t.order == order; }));
}

double check_order_conditions(const ButcherTableau& tab, int order, bool use_embedded) {
  if (order < 1 || order > 6) throw ConfigError("order-condition check supports orders 1..6");
  if (use_embedded && !tab.has_embedded()) throw ConfigError("tableau " + tab.name() + " has no embedded weights");
  const auto& weights = use_embedded ? *tab.b_embedded() : tab.b();
  const auto& trees = rooted_trees(order);
  const int s = tab.stages();

  // Stage-wise elementary weights g(t)_i = prod over children u of (A g(u))_i.
  std::vector<std::vector<double>> g(trees.size(), std::vector<double>(s, 1.0));
  std::vector<double> density(trees.size(), 1.0);
  double residual = 0.0;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    density[t] = trees[t].order;
    for (int child : trees[t].children) {
      density[t] *= density[child];
      for (int i = 0; i < s; ++i) {
        double ag = 0.0;
        for (int j = 0; j < i; ++j) ag += tab.a(i, j) * g[child][j];
        g[t][i] *= ag;
      }
    }
    double phi = 0.0;
    for (int i = 0; i < s; ++i) phi += weights[i] * g[t][i];
    residual = std::max(residual, std::abs(phi - 1.0 / density[t]));
  }
  return residual;
}

}  // namespace relaxrk
