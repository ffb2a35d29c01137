#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace syskit {

/// Dense vector over Z/2, packed into 64-bit words.
class Z2Vector {
 public:
  Z2Vector() = default;
  explicit Z2Vector(std::size_t dim) : dim_(dim), words_((dim + 63) / 64, 0) {}

  std::size_t dim() const { return dim_; }
  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (i % 64);
    if (v) words_[i / 64] |= bit; else words_[i / 64] &= ~bit;
  }
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  Z2Vector& operator^=(const Z2Vector& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  friend Z2Vector operator^(Z2Vector a, const Z2Vector& b) { return a ^= b; }
  bool operator==(const Z2Vector&) const = default;

  bool is_zero() const {
    for (auto w : words_) if (w) return false;
    return true;
  }
  /// Lowest set index, or dim() when zero.
  std::size_t lowest() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(words_[w]));
    return dim_;
  }
  /// Packs up to 64 coordinates into an integer key (used for label spaces).
  std::uint64_t key() const { return words_.empty() ? 0 : words_[0]; }
  static Z2Vector from_key(std::size_t dim, std::uint64_t key) {
    Z2Vector v(dim);
    if (!v.words_.empty()) v.words_[0] = key;
    return v;
  }
  std::string bits() const {
    std::string s(dim_, '0');
    for (std::size_t i = 0; i < dim_; ++i) if (get(i)) s[i] = '1';
    return s;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Incremental Gaussian elimination over Z/2.
class Z2Basis {
 public:
  explicit Z2Basis(std::size_t dim) : dim_(dim), pivot_row_(dim, -1) {}

  /// Reduces v against the current rows; returns the residual.
  Z2Vector reduce(Z2Vector v) const {
    for (std::size_t p = v.lowest(); p < dim_; p = v.lowest()) {
      if (pivot_row_[p] < 0) return v;
      v ^= rows_[static_cast<std::size_t>(pivot_row_[p])];
    }
    return v;
  }
  bool contains(const Z2Vector& v) const { return reduce(v).is_zero(); }

  /// Adds v if it is independent; returns whether the rank grew.
  bool insert(const Z2Vector& v) {
    Z2Vector r = reduce(v);
    if (r.is_zero()) return false;
    pivot_row_[r.lowest()] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }
  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::vector<Z2Vector> rows_;
  std::vector<int> pivot_row_;
};

inline std::size_t rank_z2(const std::vector<Z2Vector>& vs) {
  if (vs.empty()) return 0;
  Z2Basis b(vs.front().dim());
  for (const auto& v : vs) b.insert(v);
  return b.rank();
}

}  // namespace syskit
