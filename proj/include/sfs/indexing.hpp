#pragma once

#include <cmath>
#include <stdexcept>

namespace sfs {

// Spherical-harmonic index pair: order n >= 0, degree m with |m| <= n.
struct OrderDegree {
  int n = 0;
  int m = 0;

  OrderDegree() = default;
  OrderDegree(int order, int degree) : n(order), m(degree) {
    if (n < 0 || std::abs(m) > n)
      throw std::invalid_argument("OrderDegree: require n >= 0 and |m| <= n");
  }
};

inline constexpr int modal_count(int max_order) {
  return (max_order + 1) * (max_order + 1);
}

// Flat layout n^2 + n + m: order-n block occupies [n^2, (n+1)^2).
inline constexpr int modal_flat(int n, int m) { return n * n + n + m; }

// Bijection between (n,m), n <= max_order, and flat indices 0..(N+1)^2-1.
struct ModalIndexMap {
  int max_order = 0;

  ModalIndexMap() = default;
  explicit ModalIndexMap(int N) : max_order(N) {
    if (N < 0) throw std::invalid_argument("ModalIndexMap: negative max order");
  }

  int size() const { return modal_count(max_order); }

  int flat(int n, int m) const {
    if (n < 0 || n > max_order || std::abs(m) > n)
      throw std::out_of_range("ModalIndexMap::flat: index outside map");
    return modal_flat(n, m);
  }
  int flat(OrderDegree nm) const { return flat(nm.n, nm.m); }

  OrderDegree order_degree(int flat_index) const {
    if (flat_index < 0 || flat_index >= size())
      throw std::out_of_range("ModalIndexMap::order_degree: flat index outside map");
    const int n = static_cast<int>(std::sqrt(static_cast<double>(flat_index)));
    return OrderDegree(n, flat_index - n * n - n);
  }
};

}  // namespace sfs
