#pragma once

// Minimal RAII handle over mpfr_t for the few high-precision evaluations the
// exact engine needs (logarithms of huge rationals, outward-rounded exps).

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace rrt::detail {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits = 256) { mpfr_init2(v_, bits); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  ~Mpfr() { mpfr_clear(v_); }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

  /// Scientific rendering with `digits` significant digits, e.g. 1.25e-860.
  std::string to_string(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  /// Exact rational value of this (finite) number.
  mpq_class to_rational() const {
    mpz_class mant;
    const mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v_);
    mpq_class q(mant);
    if (e >= 0)
      mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
      mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return q;
  }

 private:
  mpfr_t v_;
};

/// ln(q) for q > 0, to `bits` of precision.
inline void log_rational(Mpfr& out, const mpq_class& q) {
  Mpfr num(mpfr_get_prec(out.get()) + 64), den(mpfr_get_prec(out.get()) + 64);
  mpfr_set_z(num.get(), q.get_num_mpz_t(), MPFR_RNDN);
  mpfr_set_z(den.get(), q.get_den_mpz_t(), MPFR_RNDN);
  mpfr_log(num.get(), num.get(), MPFR_RNDN);
  mpfr_log(den.get(), den.get(), MPFR_RNDN);
  mpfr_sub(out.get(), num.get(), den.get(), MPFR_RNDN);
}

}  // namespace rrt::detail
