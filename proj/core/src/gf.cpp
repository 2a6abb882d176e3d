#include "ocf/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace ocf {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomials over GF(p), little-endian coefficient vectors.
using Poly = std::vector<int>;

Poly poly_mod(Poly a, const Poly& m, int p) {
  int dm = int(m.size()) - 1;
  while (int(a.size()) > dm) {
    int da = int(a.size()) - 1;
    int lead = a.back();
    if (lead != 0) {
      for (int i = 0; i <= dm; ++i) {
        int& c = a[da - dm + i];
        c = ((c - lead * m[i]) % p + p) % p;
      }
    }
    a.pop_back();
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, int p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return r;
}

Poly decode(int v, int p) {
  Poly c;
  while (v) {
    c.push_back(v % p);
    v /= p;
  }
  return c;
}

int encode(const Poly& c, int p) {
  int v = 0;
  for (size_t i = c.size(); i-- > 0;) v = v * p + c[i];
  return v;
}

// Monic polynomial of degree d whose lower coefficients encode as `low`.
Poly monic(int d, int low, int p) {
  Poly c = decode(low, p);
  c.resize(d + 1, 0);
  c[d] = 1;
  return c;
}

bool divides(const Poly& d, const Poly& a, int p) {
  return poly_mod(a, d, p).empty();
}

// Irreducibility by trial division over all monic divisors of degree
// in [1, deg/2].
bool is_irreducible(const Poly& m, int p) {
  int deg = int(m.size()) - 1;
  for (int d = 1; 2 * d <= deg; ++d) {
    int count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int low = 0; low < count; ++low)
      if (divides(monic(d, low, p), m, p)) return false;
  }
  return true;
}

}  // namespace

FieldCtx::FieldCtx(int p, int k) : p_(p), k_(k) {
  if (!is_prime(p)) throw std::invalid_argument("make_field: p is not prime");
  if (k < 1) throw std::invalid_argument("make_field: k must be >= 1");
  long long q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    if (q > kMaxQ) throw std::invalid_argument("make_field: p^k exceeds 64");
  }
  q_ = int(q);

  if (k == 1) {
    modulus_ = {0, 1};  // x
  } else {
    int count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (int low = 0; low < count; ++low) {
      Poly m = monic(k, low, p);
      if (is_irreducible(m, p)) {
        modulus_ = m;
        break;
      }
    }
  }

  add_.assign(kMaxQ * kMaxQ, 0);
  sub_.assign(kMaxQ * kMaxQ, 0);
  mul_.assign(kMaxQ * kMaxQ, 0);
  neg_.assign(kMaxQ, 0);
  inv_.assign(kMaxQ, 0);
  for (int a = 0; a < q_; ++a) {
    Poly pa = decode(a, p);
    for (int b = 0; b < q_; ++b) {
      Poly pb = decode(b, p);
      Poly s(std::max(pa.size(), pb.size()), 0);
      Poly d(s.size(), 0);
      for (size_t i = 0; i < s.size(); ++i) {
        int ca = i < pa.size() ? pa[i] : 0;
        int cb = i < pb.size() ? pb[i] : 0;
        s[i] = (ca + cb) % p;
        d[i] = ((ca - cb) % p + p) % p;
      }
      add_[idx(a, b)] = uint8_t(encode(s, p));
      sub_[idx(a, b)] = uint8_t(encode(d, p));
      mul_[idx(a, b)] = uint8_t(encode(poly_mod(poly_mul(pa, pb, p), modulus_, p), p));
    }
    neg_[a] = sub_[idx(0, a)];
  }
  for (int a = 1; a < q_; ++a)
    for (int b = 1; b < q_; ++b)
      if (mul_[idx(a, b)] == 1) inv_[a] = uint8_t(b);

  frob_.assign(kMaxQ, 0);
  trace_.assign(kMaxQ, 0);
  sqrt_.assign(kMaxQ, 0);
  for (int a = 0; a < q_; ++a) {
    uint8_t f = uint8_t(a);
    for (int i = 1; i < p; ++i) f = mul_[idx(f, uint8_t(a))];
    frob_[a] = f;
  }
  for (int a = 0; a < q_; ++a) {
    uint8_t t = 0, x = uint8_t(a);
    for (int i = 0; i < k; ++i) {
      t = add_[idx(t, x)];
      x = frob_[x];
    }
    trace_[a] = t;
  }
  if (p == 2) {
    for (int a = 0; a < q_; ++a) sqrt_[mul_[idx(a, a)]] = uint8_t(a);
  }
}

uint8_t FieldCtx::inv(uint8_t a) const {
  if (a == 0) throw std::domain_error("FieldCtx::inv of zero");
  return inv_[a];
}

uint8_t FieldCtx::pow(uint8_t a, long long n) const {
  if (n < 0) {
    a = inv(a);
    n = -n;
  }
  uint8_t r = 1;
  while (n) {
    if (n & 1) r = mul(r, a);
    a = mul(a, a);
    n >>= 1;
  }
  return r;
}

uint8_t FieldCtx::sqrt_char2(uint8_t a) const {
  if (p_ != 2) throw std::domain_error("sqrt_char2 requires characteristic 2");
  return sqrt_[a];
}

bool FieldCtx::is_square(uint8_t a) const {
  for (int x = 0; x < q_; ++x)
    if (mul(uint8_t(x), uint8_t(x)) == a) return true;
  return false;
}

std::string FieldCtx::modulus_string() const {
  if (k_ == 1) return "x";
  std::string s;
  for (int i = k_; i >= 0; --i) {
    int c = modulus_[i];
    if (c == 0) continue;
    if (!s.empty()) s += " + ";
    if (i == 0) {
      s += std::to_string(c);
    } else {
      if (c != 1) s += std::to_string(c) + "*";
      s += (i == 1) ? "x" : "x^" + std::to_string(i);
    }
  }
  return s;
}

const FieldCtx* make_field(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<FieldCtx>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<FieldCtx>(p, k)).first;
  return it->second.get();
}

}  // namespace ocf
