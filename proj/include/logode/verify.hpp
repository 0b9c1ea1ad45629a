#pragma once

#include "logode/grouplike.hpp"
#include "logode/hopf.hpp"

#include <atomic>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace logode {

struct CheckResult {
  std::string name;    // which identity, on which structure
  bool pass = false;
  std::string detail;  // first counterexample or a short summary
};

namespace detail {
inline void record(std::vector<CheckResult>& out, const std::string& name, bool pass,
                   const std::string& detail = "") {
  out.push_back({name, pass, detail});
}

/// Flattens ((a,b),c)-style coproduct iterates to left-nested triple keys so
/// both coassociativity sides land in one basis.
inline FormalSum coproduct_left_then(HopfStructure s, const FormalSum& x) {
  FormalSum out;
  FormalSum cop = hopf_coproduct(s, x);
  for (const auto& [pk, pc] : cop.terms()) {
    FormalSum inner = hopf_coproduct(s, *pk.pair().left);
    for (const auto& [ik, ic] : inner.terms())
      out.add_term(tensor_key(Key(*ik.pair().left),
                              tensor_key(Key(*ik.pair().right), Key(*pk.pair().right))),
                   pc * ic);
  }
  return out;
}

inline FormalSum coproduct_right_then(HopfStructure s, const FormalSum& x) {
  FormalSum out;
  FormalSum cop = hopf_coproduct(s, x);
  for (const auto& [pk, pc] : cop.terms()) {
    FormalSum inner = hopf_coproduct(s, *pk.pair().right);
    for (const auto& [ik, ic] : inner.terms())
      out.add_term(tensor_key(Key(*pk.pair().left),
                              tensor_key(Key(*ik.pair().left), Key(*ik.pair().right))),
                   pc * ic);
  }
  return out;
}
}  // namespace detail

inline int configured_threads() {
  if (const char* env = std::getenv("LOGODE_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

/// Runs fn(i) for i in [0, n); splits across LOGODE_THREADS when set. fn must
/// be safe to run concurrently for distinct i (all sweeps here are pure).
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  int threads = std::min(configured_threads(), n > 0 ? n : 1);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

inline std::string hopf_structure_name(HopfStructure s) {
  switch (s) {
    case HopfStructure::shuffle_words: return "shuffle";
    case HopfStructure::tensor_words: return "tensor";
    case HopfStructure::connes_kreimer: return "ck";
    case HopfStructure::grossman_larson: return "gl";
    case HopfStructure::mkw_dual: return "mkw";
  }
  return "?";
}

/// Counit, coassociativity, product/coproduct compatibility and the antipode
/// identity, exhaustively on all basis elements of grade <= max_grade.
inline std::vector<CheckResult> hopf_axiom_suite(HopfStructure s, int max_grade, int alphabet) {
  std::vector<CheckResult> out;
  const std::string tag = hopf_structure_name(s);
  auto keys = basis_keys_up_to(s, max_grade, alphabet);
  const Key one = unit_key(s);

  bool counit_ok = true, coassoc_ok = true, antipode_ok = true;
  std::string counit_bad, coassoc_bad, antipode_bad;
  Antipode S(s);
  for (const auto& k : keys) {
    FormalSum cop = hopf_coproduct(s, k);
    FormalSum left_collapsed, right_collapsed;
    FormalSum s_left, s_right;
    for (const auto& [pk, pc] : cop.terms()) {
      const Key& a = *pk.pair().left;
      const Key& b = *pk.pair().right;
      if (a.grade() == 0) left_collapsed.add_term(b, pc);   // (eps (x) Id)
      if (b.grade() == 0) right_collapsed.add_term(a, pc);  // (Id (x) eps)
      s_left += pc * hopf_product(s, S.on_key(a), FormalSum::term(b));
      s_right += pc * hopf_product(s, FormalSum::term(a), S.on_key(b));
    }
    FormalSum self = FormalSum::term(k);
    if (!(left_collapsed == self && right_collapsed == self) && counit_ok) {
      counit_ok = false;
      counit_bad = k.encode();
    }
    FormalSum expected = k.grade() == 0 ? unit_sum(s) : FormalSum();
    if (!(s_left == expected && s_right == expected) && antipode_ok) {
      antipode_ok = false;
      antipode_bad = k.encode();
    }
    if (!(detail::coproduct_left_then(s, self) == detail::coproduct_right_then(s, self)) &&
        coassoc_ok) {
      coassoc_ok = false;
      coassoc_bad = k.encode();
    }
  }
  detail::record(out, tag + ": counit law (grade<=" + std::to_string(max_grade) + ")", counit_ok,
                 counit_bad);
  detail::record(out, tag + ": coassociativity (grade<=" + std::to_string(max_grade) + ")",
                 coassoc_ok, coassoc_bad);
  detail::record(out, tag + ": antipode identity (grade<=" + std::to_string(max_grade) + ")",
                 antipode_ok, antipode_bad);

  bool compat_ok = true;
  std::string compat_bad;
  for (const auto& x : keys) {
    for (const auto& y : keys) {
      if (x.grade() + y.grade() > max_grade) continue;
      FormalSum xy = hopf_product(s, x, y);
      FormalSum lhs = hopf_coproduct(s, xy);
      FormalSum rhs = hopf_square_product(s, hopf_coproduct(s, FormalSum::term(x)),
                                          hopf_coproduct(s, FormalSum::term(y)));
      if (!(lhs == rhs)) {
        compat_ok = false;
        compat_bad = x.encode() + " , " + y.encode();
        break;
      }
    }
    if (!compat_ok) break;
  }
  detail::record(out,
                 tag + ": compatibility Delta(xy)=Delta(x)Delta(y) (grade<=" +
                     std::to_string(max_grade) + ")",
                 compat_ok, compat_bad);
  return out;
}

inline std::vector<CheckResult> hopf_axiom_suite_all(int max_grade, int alphabet) {
  std::vector<CheckResult> out;
  const HopfStructure all[] = {HopfStructure::shuffle_words, HopfStructure::tensor_words,
                               HopfStructure::connes_kreimer, HopfStructure::grossman_larson,
                               HopfStructure::mkw_dual};
  std::vector<std::vector<CheckResult>> parts(5);
  parallel_for(5, [&](int i) { parts[i] = hopf_axiom_suite(all[i], max_grade, alphabet); });
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  return out;
}

/// Deterministic rational fuzz helper shared by the randomized suites.
class RationalSampler {
 public:
  explicit RationalSampler(uint64_t seed) : rng_(seed) {}

  Rational small(int num_range = 5, int den_range = 4) {
    long long num = static_cast<long long>(rng_() % (2 * num_range + 1)) - num_range;
    long long den = 1 + static_cast<long long>(rng_() % den_range);
    return Rational(num, den);
  }

  Rational nonzero(int num_range = 5, int den_range = 4) {
    for (;;) {
      Rational r = small(num_range, den_range);
      if (r != 0) return r;
    }
  }

  uint64_t raw() { return rng_(); }
  bool coin(int one_in = 2) { return rng_() % one_in == 0; }

 private:
  std::mt19937_64 rng_;
};

/// Random element with vanishing grade-0 part (exp_n domain).
inline DualElement random_nilpotent(RationalSampler& sampler, Structure s, int level,
                                    int alphabet) {
  FormalSum v(level);
  for (int g = 1; g <= level; ++g)
    for (const auto& k : basis_keys(dual_hopf(s), g, alphabet))
      if (sampler.coin(3)) v.add_term(k, sampler.small());
  return DualElement(std::move(v), s, level);
}

/// exp/log inversion on `trials` random elements per structure.
inline std::vector<CheckResult> exp_log_suite(int level, int trials, uint64_t seed) {
  std::vector<CheckResult> out;
  for (Structure s : {Structure::tensor, Structure::gl, Structure::mkw}) {
    RationalSampler sampler(seed + static_cast<uint64_t>(s));
    bool ok = true;
    std::string bad;
    for (int t = 0; t < trials && ok; ++t) {
      DualElement h = random_nilpotent(sampler, s, level, 2);
      DualElement g = exp_n(h);
      if (!(log_n(g).value == h.value)) {
        ok = false;
        bad = "log(exp(h)) != h, trial " + std::to_string(t);
      }
      DualElement one_plus = DualElement(
          unit_sum(dual_hopf(s), level) + random_nilpotent(sampler, s, level, 2).value, s, level);
      if (ok && !(exp_n(log_n(one_plus)).value == one_plus.value)) {
        ok = false;
        bad = "exp(log(g)) != g, trial " + std::to_string(t);
      }
    }
    detail::record(out,
                   structure_name(s) + ": exp_n/log_n mutually inverse at level " +
                       std::to_string(level) + " (" + std::to_string(trials) + " trials)",
                   ok, bad);
  }
  return out;
}

}  // namespace logode
