// Copyright 2026 The jnr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "jnr/groups.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "jnr/errors.hpp"

namespace jnr::groups {

namespace {

void require_order(GroupKind kind, int order) {
  const int least = kind == GroupKind::Cyclic ? 2 : 1;
  if (order < least)
    throw PreconditionError("group order parameter must be at least " + std::to_string(least) +
                            ", got " + std::to_string(order));
}

std::string exponent_key(const int* e, int k) {
  return std::string(reinterpret_cast<const char*>(e), sizeof(int) * static_cast<std::size_t>(k));
}

std::vector<int> exponents_of(const GroupSpec& spec, const Word& w) {
  std::vector<int> e(static_cast<std::size_t>(spec.generators()), 0);
  for (int l : w.letters) e[static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
  if (spec.kind == GroupKind::Cyclic) e[0] = ((e[0] % spec.order) + spec.order) % spec.order;
  return e;
}

}  // namespace

GroupSpec GroupSpec::free(int n) {
  require_order(GroupKind::Free, n);
  return {GroupKind::Free, n};
}
GroupSpec GroupSpec::abelian(int d) {
  require_order(GroupKind::FreeAbelian, d);
  return {GroupKind::FreeAbelian, d};
}
GroupSpec GroupSpec::cyclic(int m) {
  require_order(GroupKind::Cyclic, m);
  return {GroupKind::Cyclic, m};
}

std::string GroupSpec::to_string() const {
  switch (kind) {
    case GroupKind::Free: return "free:" + std::to_string(order);
    case GroupKind::FreeAbelian: return "abelian:" + std::to_string(order);
    case GroupKind::Cyclic: return "cyclic:" + std::to_string(order);
  }
  return "?";
}

GroupSpec parse_group_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("group spec must look like free:n, abelian:d or cyclic:m, got '" +
                     std::string(text) + "'");
  const std::string_view name = text.substr(0, colon);
  const std::string_view number = text.substr(colon + 1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc() || ptr != number.data() + number.size() || number.empty())
    throw ParseError("bad group order in '" + std::string(text) + "'");
  try {
    if (name == "free") return GroupSpec::free(value);
    if (name == "abelian") return GroupSpec::abelian(value);
    if (name == "cyclic") return GroupSpec::cyclic(value);
  } catch (const PreconditionError& e) {
    throw ParseError(std::string(e.what()) + " in '" + std::string(text) + "'");
  }
  throw ParseError("unknown group kind '" + std::string(name) + "'");
}

Word reduce(const GroupSpec& spec, const std::vector<int>& letters) {
  const int k = spec.generators();
  for (int l : letters)
    if (l == 0 || std::abs(l) > k)
      throw PreconditionError("letter " + std::to_string(l) + " is not a generator of " +
                              spec.to_string());
  Word out;
  if (spec.kind == GroupKind::Free) {
    for (int l : letters) {
      if (!out.letters.empty() && out.letters.back() == -l)
        out.letters.pop_back();
      else
        out.letters.push_back(l);
    }
    return out;
  }
  const std::vector<int> e = exponents_of(spec, Word{letters});
  for (int i = 0; i < k; ++i)
    for (int c = 0; c < std::abs(e[static_cast<std::size_t>(i)]); ++c)
      out.letters.push_back(e[static_cast<std::size_t>(i)] > 0 ? i + 1 : -(i + 1));
  return out;
}

double projected_ball_size(const GroupSpec& spec, int radius) {
  if (radius < 0) throw PreconditionError("ball radius must be nonnegative");
  const double r = radius;
  switch (spec.kind) {
    case GroupKind::Free: {
      const double n = spec.order;
      if (spec.order == 1) return 2.0 * r + 1.0;
      return 1.0 + 2.0 * n * (std::pow(2.0 * n - 1.0, r) - 1.0) / (2.0 * n - 2.0);
    }
    case GroupKind::FreeAbelian: {
      // sum_j 2^j C(d, j) C(R, j)
      double total = 0.0;
      double binom_d = 1.0;
      double binom_r = 1.0;
      for (int j = 0; j <= std::min(spec.order, radius); ++j) {
        total += std::ldexp(binom_d * binom_r, j);
        binom_d = binom_d * (spec.order - j) / (j + 1);
        binom_r = binom_r * (radius - j) / (j + 1);
      }
      return total;
    }
    case GroupKind::Cyclic: return std::min(static_cast<double>(spec.order), 2.0 * r + 1.0);
  }
  return 0.0;
}

BallIndex::BallIndex(const GroupSpec& spec, int radius, Index cap)
    : spec_(spec), radius_(radius), letters_(2 * spec.generators()) {
  const double projected = projected_ball_size(spec, radius);
  const double limit = std::min<double>(static_cast<double>(cap), std::numeric_limits<std::int32_t>::max());
  if (projected > limit)
    throw SizeLimitError("ball of radius " + std::to_string(radius) + " in " + spec.to_string() +
                         " has " + std::to_string(static_cast<long double>(projected)) +
                         " elements, above the cap of " + std::to_string(static_cast<long long>(limit)));
  const auto expected = static_cast<std::size_t>(projected);
  const int k = spec.generators();
  const auto slot_letter = [k](int slot) { return slot < k ? slot + 1 : -(slot - k + 1); };
  const auto inverse = [k](int slot) { return slot < k ? slot + k : slot - k; };

  neighbors_.reserve(expected * letters_);
  length_.reserve(expected);
  parent_.reserve(expected);
  first_.reserve(expected);
  const auto add = [&](std::int32_t parent, int slot, int len) {
    neighbors_.insert(neighbors_.end(), letters_, -1);
    parent_.push_back(parent);
    first_.push_back(static_cast<std::int8_t>(slot));
    length_.push_back(len);
    return static_cast<std::int32_t>(length_.size() - 1);
  };
  add(-1, -1, 0);

  if (spec.kind == GroupKind::Free) {
    for (std::size_t i = 0; i < length_.size(); ++i) {
      const auto self = static_cast<std::int32_t>(i);
      if (first_[i] >= 0) neighbors_[i * letters_ + inverse(first_[i])] = parent_[i];
      if (length_[i] == radius) continue;
      for (int slot = 0; slot < letters_; ++slot) {
        if (first_[i] >= 0 && slot == inverse(first_[i])) continue;
        const std::int32_t j = add(self, slot, length_[i] + 1);
        neighbors_[i * letters_ + slot] = j;
      }
    }
    return;
  }

  // Abelian and cyclic: exponent vectors with a lookup table.
  std::unordered_map<std::string, std::int32_t> lookup;
  exponents_.assign(static_cast<std::size_t>(k), 0);
  lookup.emplace(exponent_key(exponents_.data(), k), 0);
  std::vector<int> e(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < length_.size(); ++i) {
    for (int slot = 0; slot < letters_; ++slot) {
      std::copy_n(exponents_.begin() + static_cast<std::ptrdiff_t>(i * k), k, e.begin());
      const int letter = slot_letter(slot);
      int& c = e[static_cast<std::size_t>(std::abs(letter) - 1)];
      c += letter > 0 ? 1 : -1;
      if (spec.kind == GroupKind::Cyclic) c = ((c % spec.order) + spec.order) % spec.order;
      const std::string key = exponent_key(e.data(), k);
      const auto it = lookup.find(key);
      if (it != lookup.end()) {
        neighbors_[i * letters_ + slot] = it->second;
      } else if (length_[i] < radius) {
        const std::int32_t j = add(static_cast<std::int32_t>(i), slot, length_[i] + 1);
        exponents_.insert(exponents_.end(), e.begin(), e.end());
        lookup.emplace(key, j);
        neighbors_[i * letters_ + slot] = j;
      }
    }
  }
  lookup_ = std::move(lookup);
}

Word BallIndex::word(Index element) const {
  const int k = spec_.generators();
  if (spec_.kind == GroupKind::Free) {
    Word w;
    for (auto i = static_cast<std::int32_t>(element); i > 0; i = parent_[static_cast<std::size_t>(i)]) {
      const int slot = first_[static_cast<std::size_t>(i)];
      w.letters.push_back(slot < k ? slot + 1 : -(slot - k + 1));
    }
    return w;
  }
  std::vector<int> letters;
  for (int g = 0; g < k; ++g) {
    const int c = exponents_[static_cast<std::size_t>(element) * k + g];
    for (int r = 0; r < std::abs(c); ++r) letters.push_back(c > 0 ? g + 1 : -(g + 1));
  }
  return Word{letters};
}

Index BallIndex::find(const Word& w) const {
  const Word r = reduce(spec_, w.letters);
  const int k = spec_.generators();
  if (spec_.kind == GroupKind::Free) {
    Index pos = 0;
    for (auto it = r.letters.rbegin(); it != r.letters.rend(); ++it) {
      const int slot = *it > 0 ? *it - 1 : -*it - 1 + k;
      pos = neighbor(pos, slot);
      if (pos < 0) return -1;
    }
    return pos;
  }
  const std::vector<int> e = exponents_of(spec_, r);
  const auto it = lookup_.find(exponent_key(e.data(), k));
  return it == lookup_.end() ? -1 : it->second;
}

namespace {

void check_coeffs(const GroupSpec& spec, std::size_t count) {
  if (count != static_cast<std::size_t>(spec.generators()))
    throw ShapeError(spec.to_string() + " has " + std::to_string(spec.generators()) +
                     " generators but " + std::to_string(count) + " coefficients were given");
}

}  // namespace

SparseOperator rep_operator(const BallIndex& ball, const std::vector<Complex>& coeffs) {
  check_coeffs(ball.spec(), coeffs.size());
  const int k = ball.spec().generators();
  std::vector<linalg::Triplet> t;
  t.reserve(static_cast<std::size_t>(ball.size()) * k);
  for (Index g = 0; g < ball.size(); ++g)
    for (int i = 0; i < k; ++i)
      if (const Index h = ball.neighbor(g, i); h >= 0) t.push_back({h, g, coeffs[i]});
  return SparseOperator(ball.size(), t, false);
}

SparseOperator rep_operator(const GroupSpec& spec, const std::vector<Complex>& coeffs, int radius,
                            Index cap) {
  check_coeffs(spec, coeffs.size());
  return rep_operator(BallIndex(spec, radius, cap), coeffs);
}

SparseOperator real_rep_operator(const BallIndex& ball, const std::vector<Complex>& coeffs) {
  check_coeffs(ball.spec(), coeffs.size());
  const int k = ball.spec().generators();
  std::vector<linalg::Triplet> t;
  t.reserve(static_cast<std::size_t>(ball.size()) * k * 2);
  for (Index g = 0; g < ball.size(); ++g)
    for (int i = 0; i < k; ++i)
      if (const Index h = ball.neighbor(g, i); h >= 0) {
        t.push_back({h, g, 0.5 * coeffs[i]});
        t.push_back({g, h, 0.5 * std::conj(coeffs[i])});
      }
  return SparseOperator(ball.size(), t, true);
}

SparseOperator real_rep_operator(const GroupSpec& spec, const std::vector<Complex>& coeffs,
                                 int radius, Index cap) {
  check_coeffs(spec, coeffs.size());
  return real_rep_operator(BallIndex(spec, radius, cap), coeffs);
}

}  // namespace jnr::groups
