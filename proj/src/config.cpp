/*
 * Copyright 2026 The Burger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "burger/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "burger/error.hpp"
#include "burger/random.hpp"

namespace burger {
namespace {

constexpr const char* kModule = "trainer";

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw InvalidConfiguration(kModule, "TrainRunConfig", "bad value for '" + key + "': '" + value + "'");
}

double to_double(const std::string& key, const std::string& value) {
  std::string v = value;
  bool exponent = false;
  if (v.rfind("e^", 0) == 0) {
    exponent = true;
    v = v.substr(2);
  }
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) bad_value(key, value);
    return exponent ? std::exp(x) : x;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  if (value.empty() || value[0] == '-') bad_value(key, value);
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(value, &used);
    if (used != value.size()) bad_value(key, value);
    return x;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

void TrainRunConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw InvalidConfiguration(kModule, "TrainRunConfig", what);
  };
  if (d < 1) fail("d must be >= 1");
  if (batch < 1) fail("batch must be >= 1");
  if (K < 0) fail("K must be >= 0");
  if (tau < 1) fail("tau must be >= 1");
  if (patience < 1) fail("patience must be >= 1");
  if (!(lambda1 >= 0 && lambda2 >= 0 && alpha >= 0 && beta >= 0)) fail("loss weights must be >= 0");
  if (!(C1 > 0 && C2 > 0)) fail("C1 and C2 must be > 0");
  if (!(lr > 0)) fail("lr must be > 0");
  if (!(p >= 0 && p <= 1)) fail("p must lie in [0, 1]");
  if (!(prior_value > 0 && prior_value < 1)) fail("prior_value must lie in (0, 1)");
  if (!(prior_epsilon > 0 && prior_epsilon < 0.5)) fail("prior_epsilon must lie in (0, 0.5)");
  if (!(split_ratio > 0 && split_ratio < 1)) fail("split_ratio must lie in (0, 1)");
  if (!(init_std > 0)) fail("init_std must be > 0");
}

SplitOptions TrainRunConfig::split_options(bool all_negatives) const {
  return {split_ratio, negatives_per_user, all_negatives, derive_seed(seed, 0)};
}

void set_config_value(TrainRunConfig& c, const std::string& key, const std::string& value) {
  if (key == "d") c.d = static_cast<int>(to_unsigned(key, value));
  else if (key == "batch") c.batch = to_unsigned(key, value);
  else if (key == "lambda1") c.lambda1 = to_double(key, value);
  else if (key == "lambda2") c.lambda2 = to_double(key, value);
  else if (key == "alpha") c.alpha = to_double(key, value);
  else if (key == "beta") c.beta = to_double(key, value);
  else if (key == "C1") c.C1 = to_double(key, value);
  else if (key == "C2") c.C2 = to_double(key, value);
  else if (key == "lr") c.lr = to_double(key, value);
  else if (key == "K") c.K = static_cast<int>(to_unsigned(key, value));
  else if (key == "tau") c.tau = to_unsigned(key, value);
  else if (key == "p") c.p = to_double(key, value);
  else if (key == "agg") {
    if (value == "mean") c.agg = AggMode::kMean;
    else if (value == "mlp") c.agg = AggMode::kMlp;
    else bad_value(key, value);
  } else if (key == "prior") {
    if (value == "constant") c.prior = PriorMode::kConstant;
    else if (value == "degree") c.prior = PriorMode::kDegree;
    else bad_value(key, value);
  } else if (key == "prior_value") c.prior_value = to_double(key, value);
  else if (key == "prior_epsilon") c.prior_epsilon = to_double(key, value);
  else if (key == "epochs_per_iteration") c.epochs_per_iteration = to_unsigned(key, value);
  else if (key == "max_iterations") c.max_iterations = to_unsigned(key, value);
  else if (key == "patience") c.patience = to_unsigned(key, value);
  else if (key == "negatives_per_user") c.negatives_per_user = to_unsigned(key, value);
  else if (key == "split_ratio") c.split_ratio = to_double(key, value);
  else if (key == "batches_per_epoch") c.batches_per_epoch = to_unsigned(key, value);
  else if (key == "init_std") c.init_std = to_double(key, value);
  else if (key == "seed") c.seed = to_unsigned(key, value);
  else if (key == "use_tensor") c.use_tensor = to_bool(key, value);
  else if (key == "denoise") c.denoise = to_bool(key, value);
  else if (key == "reset_moments") c.reset_moments = to_bool(key, value);
  else if (key == "symmetrize_union") c.symmetrize_union = to_bool(key, value);
  else throw InvalidConfiguration(kModule, "TrainRunConfig", "unknown key '" + key + "'");
}

TrainRunConfig parse_config(std::istream& in) {
  TrainRunConfig c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidConfiguration(kModule, "TrainRunConfig",
                                 "line " + std::to_string(lineno) + ": expected key=value");
    set_config_value(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  c.validate();
  return c;
}

TrainRunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfiguration(kModule, "TrainRunConfig", "cannot open " + path.string());
  return parse_config(in);
}

std::string config_to_text(const TrainRunConfig& c) {
  std::ostringstream os;
  os << "d=" << c.d << '\n'
     << "batch=" << c.batch << '\n'
     << "lambda1=" << fmt(c.lambda1) << '\n'
     << "lambda2=" << fmt(c.lambda2) << '\n'
     << "alpha=" << fmt(c.alpha) << '\n'
     << "beta=" << fmt(c.beta) << '\n'
     << "C1=" << fmt(c.C1) << '\n'
     << "C2=" << fmt(c.C2) << '\n'
     << "lr=" << fmt(c.lr) << '\n'
     << "K=" << c.K << '\n'
     << "tau=" << c.tau << '\n'
     << "p=" << fmt(c.p) << '\n'
     << "agg=" << (c.agg == AggMode::kMean ? "mean" : "mlp") << '\n'
     << "prior=" << (c.prior == PriorMode::kConstant ? "constant" : "degree") << '\n'
     << "prior_value=" << fmt(c.prior_value) << '\n'
     << "prior_epsilon=" << fmt(c.prior_epsilon) << '\n'
     << "epochs_per_iteration=" << c.epochs_per_iteration << '\n'
     << "max_iterations=" << c.max_iterations << '\n'
     << "patience=" << c.patience << '\n'
     << "negatives_per_user=" << c.negatives_per_user << '\n'
     << "split_ratio=" << fmt(c.split_ratio) << '\n'
     << "batches_per_epoch=" << c.batches_per_epoch << '\n'
     << "init_std=" << fmt(c.init_std) << '\n'
     << "seed=" << c.seed << '\n'
     << "use_tensor=" << (c.use_tensor ? "true" : "false") << '\n'
     << "denoise=" << (c.denoise ? "true" : "false") << '\n'
     << "reset_moments=" << (c.reset_moments ? "true" : "false") << '\n'
     << "symmetrize_union=" << (c.symmetrize_union ? "true" : "false") << '\n';
  return os.str();
}

std::string config_hash(const TrainRunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void apply_preset(TrainRunConfig& config, const std::string& dataset) {
  if (dataset == "ciao") {
    config.alpha = std::exp(-3.0);
    config.beta = std::exp(-2.0);
  } else if (dataset == "douban") {
    config.alpha = std::exp(-2.0);
    config.beta = std::exp(-2.0);
    config.tau = 3;
  } else if (dataset == "yelp") {
    config.alpha = std::exp(-2.0);
    config.beta = std::exp(-3.0);
  } else {
    throw InvalidConfiguration(kModule, "apply_preset", "unknown preset '" + dataset + "'");
  }
}

}  // namespace burger
