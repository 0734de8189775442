#pragma once

// Brute-force references for the partition and group-cohomology code. None of
// them call into the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using Monomials = std::map<std::vector<int>, std::int64_t>;

// s_lambda(x_1..x_m) by enumerating semistandard tableaux.
inline Monomials schur_polynomial(const std::vector<int>& lambda, int m) {
  Monomials out;
  if (static_cast<int>(lambda.size()) > m) return out;
  std::vector<std::vector<int>> t;
  for (int part : lambda) t.emplace_back(static_cast<std::size_t>(part), 0);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t r = 0; r < lambda.size(); ++r)
    for (std::size_t c = 0; c < t[r].size(); ++c) cells.emplace_back(r, c);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == cells.size()) {
      std::vector<int> e(static_cast<std::size_t>(m), 0);
      for (const auto& row : t)
        for (int v : row) ++e[static_cast<std::size_t>(v - 1)];
      ++out[e];
      return;
    }
    const auto [r, c] = cells[k];
    int lo = 1;
    if (c > 0) lo = std::max(lo, t[r][c - 1]);
    if (r > 0) lo = std::max(lo, t[r - 1][c] + 1);
    for (int v = lo; v <= m; ++v) {
      t[r][c] = v;
      self(self, k + 1);
    }
    t[r][c] = 0;
  };
  rec(rec, 0);
  return out;
}

inline Monomials poly_mul(const Monomials& a, const Monomials& b) {
  Monomials out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// Expands a symmetric polynomial in Schur polynomials by peeling off the
// lexicographically largest monomial.
inline std::map<std::vector<int>, std::int64_t> schur_expand(Monomials f, int m) {
  std::map<std::vector<int>, std::int64_t> out;
  while (!f.empty()) {
    const auto top = std::prev(f.end());
    std::vector<int> lambda = top->first;
    const std::int64_t c = top->second;
    Monomials s = schur_polynomial(
        [&] {
          std::vector<int> p;
          for (int e : lambda)
            if (e > 0) p.push_back(e);
          return p;
        }(),
        m);
    for (const auto& [e, v] : s) {
      f[e] -= c * v;
      if (f[e] == 0) f.erase(e);
    }
    while (!lambda.empty() && lambda.back() == 0) lambda.pop_back();
    out[lambda] += c;
  }
  return out;
}

// Prime-power invariants of H_2(A, Z) for A = Z/d_1 x ... x Z/d_r, from the
// normalized bar complex: the torsion of coker(d_3) computed by a Smith form
// over Z/p^K for each prime p dividing |A|. H^2(A, C^x) is its dual.
inline std::vector<std::int64_t> h2_prime_powers(const std::vector<int>& ds) {
  int n = 1;
  for (int d : ds) n *= d;
  auto decode = [&](int idx) {
    std::vector<int> a(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      a[i] = idx % ds[i];
      idx /= ds[i];
    }
    return a;
  };
  auto encode = [&](const std::vector<int>& a) {
    int idx = 0;
    for (std::size_t i = ds.size(); i-- > 0;) idx = idx * ds[i] + a[i];
    return idx;
  };
  std::vector<std::vector<int>> add(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      auto a = decode(x), b = decode(y);
      for (std::size_t i = 0; i < ds.size(); ++i) a[i] = (a[i] + b[i]) % ds[i];
      add[x][y] = encode(a);
    }
  const int k = n - 1;  // non-identity elements 1..n-1
  auto col = [&](int a, int b) { return (a - 1) * k + (b - 1); };

  std::vector<std::int64_t> out;
  for (int p = 2; p <= n; ++p) {
    bool prime = true;
    for (int q = 2; q * q <= p; ++q) prime = prime && p % q;
    if (!prime || n % p) continue;
    int vp = 0;
    for (int m = n; m % p == 0; m /= p) ++vp;
    const int kk = vp + 2;
    std::int64_t mod = 1;
    for (int i = 0; i < kk; ++i) mod *= p;
    const std::size_t cols = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
    std::vector<std::vector<std::int64_t>> mat;
    for (int a = 1; a < n; ++a)
      for (int b = 1; b < n; ++b)
        for (int c = 1; c < n; ++c) {
          std::vector<std::int64_t> row(cols, 0);
          auto put = [&](int x, int y, int sign) {
            if (x == 0 || y == 0) return;
            auto& e = row[static_cast<std::size_t>(col(x, y))];
            e = ((e + sign) % mod + mod) % mod;
          };
          put(b, c, 1);
          put(add[a][b], c, -1);
          put(a, add[b][c], 1);
          put(a, b, -1);
          mat.push_back(std::move(row));
        }
    auto val = [&](std::int64_t x) {
      if (x == 0) return kk;
      int v = 0;
      while (x % p == 0) {
        x /= p;
        ++v;
      }
      return v;
    };
    auto inverse = [&](std::int64_t u) {
      for (std::int64_t t = 1; t < mod; ++t)
        if (u * t % mod == 1) return t;
      return std::int64_t{0};
    };
    std::size_t rows = mat.size();
    std::vector<char> row_done(rows, 0), col_done(cols, 0);
    for (;;) {
      int best = kk;
      std::size_t pr = 0, pc = 0;
      for (std::size_t r = 0; r < rows && best > 0; ++r) {
        if (row_done[r]) continue;
        for (std::size_t c = 0; c < cols; ++c) {
          if (col_done[c] || mat[r][c] == 0) continue;
          const int v = val(mat[r][c]);
          if (v < best) {
            best = v;
            pr = r;
            pc = c;
            if (v == 0) break;
          }
        }
      }
      if (best >= kk) break;
      if (best > 0) {
        std::int64_t pk = 1;
        for (int i = 0; i < best; ++i) pk *= p;
        out.push_back(pk);
      }
      // Clear the pivot column with row operations; the pivot row's other
      // entries are then irrelevant for the remaining invariants.
      const std::int64_t unit = mat[pr][pc] / [&] {
        std::int64_t pk = 1;
        for (int i = 0; i < best; ++i) pk *= p;
        return pk;
      }();
      const std::int64_t uinv = inverse(unit % mod);
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == pr || row_done[r] || mat[r][pc] == 0) continue;
        std::int64_t pk = 1;
        for (int i = 0; i < best; ++i) pk *= p;
        const std::int64_t factor = (mat[r][pc] / pk) % mod * uinv % mod;
        for (std::size_t c = 0; c < cols; ++c) {
          if (col_done[c] || mat[pr][c] == 0) continue;
          mat[r][c] = ((mat[r][c] - factor * mat[pr][c]) % mod + mod) % mod;
        }
      }
      row_done[pr] = 1;
      col_done[pc] = 1;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Prime-power decomposition of Z/g_1 x ... x Z/g_k.
inline std::vector<std::int64_t> prime_powers(const std::vector<std::int64_t>& gs) {
  std::vector<std::int64_t> out;
  for (std::int64_t g : gs) {
    for (std::int64_t p = 2; g > 1; ++p) {
      std::int64_t q = 1;
      while (g % p == 0) {
        g /= p;
        q *= p;
      }
      if (q > 1) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
