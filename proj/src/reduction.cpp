#include "lucasrep/reduction.hpp"

namespace lucasrep {

namespace {

bool radius_below_quarter(const Ball& b) {
  double r = b.radius_double();
  return r < 0.25;
}

}  // namespace

GammaContext::GammaContext(RealValue gamma, const ExpandOptions& opt)
    : gamma_(std::move(gamma)), opt_(opt) {}

void GammaContext::ensure(std::size_t count) {
  if (expansion_.certified_count >= count) return;
  expansion_ = expand(gamma_, count, opt_);
  if (expansion_.certified_count < count)
    throw CertificationError("GammaContext: expansion shorter than needed");
  convergents_ = convergents(expansion_, expansion_.certified_count);
}

const Convergent& GammaContext::at(std::size_t index) {
  if (index >= convergents_.size()) ensure(std::max<std::size_t>(index + 8, 32));
  return convergents_[index];
}

std::size_t GammaContext::first_index_exceeding(const mpz_class& bound) {
  std::size_t i = 0;
  while (true) {
    if (at(i).q > bound) return i;
    ++i;
  }
}

std::optional<Ball> GammaContext::gamma_q_distance(std::size_t index,
                                                   PrecisionSpec p) {
  auto key = std::make_pair(index, p.bits);
  auto it = distances_.find(key);
  if (it != distances_.end()) return it->second;
  const Convergent& c = at(index);
  Ball g = gamma_.eval(p);
  Ball gq = g * Ball::from_integer(c.q, p);
  if (!radius_below_quarter(gq)) return std::nullopt;
  Ball d = nearest_int_distance(gq);
  distances_.emplace(key, d);
  return d;
}

std::optional<IntegerRelation> scan_integer_relation(const RealValue& gamma,
                                                     const RealValue& mu,
                                                     long max_r,
                                                     unsigned cap) {
  std::vector<long> undecided;
  for (long r = -max_r; r <= max_r; ++r) undecided.push_back(r);
  for (unsigned bits = 1024; !undecided.empty() && bits <= cap; bits *= 2) {
    PrecisionSpec p(bits);
    Ball g = gamma.eval(p);
    Ball m = mu.eval(p);
    // residual threshold for declaring a relation at this precision
    Ball tol = Ball::from_rational(
        mpq_class(mpz_class(1), mpz_class(1) << (bits / 2)), p);
    std::vector<long> still;
    for (long r : undecided) {
      Ball v = (r >= 0 ? Ball::exact(r, p) * g : -(Ball::exact(-r, p) * g)) + m;
      if (v.radius_double() >= 0.25) {
        still.push_back(r);
        continue;
      }
      mpz_class n = nearest_int_of_midpoint(v);
      Ball d = abs(v - Ball::from_integer(n, p));
      if (certified_less(d, tol)) return IntegerRelation{r, n};
      if (d.is_positive()) continue;  // certified: no relation at this r
      still.push_back(r);
    }
    undecided = std::move(still);
  }
  return std::nullopt;
}

ReductionResult dp_reduce(const ReductionInstance& inst,
                          const ReduceOptions& opt, GammaContext* ctx) {
  if (inst.M < 1) throw DomainError("dp_reduce: M must be >= 1");
  if (opt.max_advance < 0) throw DomainError("dp_reduce: bad max_advance");

  if (opt.scan_relations) {
    if (auto rel = scan_integer_relation(inst.gamma, inst.mu)) {
      ReductionResult res;
      res.kind = ReductionResult::Kind::Degenerate;
      res.relation = rel;
      res.note = "mu = " + rel->m.get_str() + " - (" + std::to_string(rel->r) +
                 ")*gamma within certified tolerance";
      return res;
    }
  }

  std::optional<GammaContext> local;
  if (!ctx) {
    ExpandOptions eo;
    eo.start = opt.start;
    eo.cap = opt.cap;
    eo.cache = opt.cache;
    local.emplace(inst.gamma, eo);
    ctx = &*local;
  }

  mpz_class threshold = inst.M * opt.q_factor;
  std::size_t i0 = ctx->first_index_exceeding(threshold);
  Ball Mb = Ball::from_integer(inst.M, opt.start);

  for (int j = 0; j <= opt.max_advance; ++j) {
    std::size_t idx = i0 + static_cast<std::size_t>(j);
    Convergent c = ctx->at(idx);
    Ball qb = Ball::from_integer(c.q, opt.start);

    std::optional<Ball> eps_ball;
    bool advance = false;
    for (PrecisionSpec p = opt.start;;) {
      auto gd = ctx->gamma_q_distance(idx, p);
      if (gd) {
        Ball mu = inst.mu.eval(p);
        Ball muq = mu * Ball::from_integer(c.q, p);
        if (radius_below_quarter(muq)) {
          Ball eps = nearest_int_distance(muq) - Mb * *gd;
          if (eps.is_positive()) {
            eps_ball = eps;
            break;
          }
          if (eps.is_negative()) {
            advance = true;
            break;
          }
        }
      }
      if (p.bits >= opt.cap) {
        advance = true;  // undecidable even at the ceiling
        break;
      }
      p = p.doubled(opt.cap);
    }
    if (advance) continue;

    PrecisionSpec wp(std::max(opt.start.bits, eps_ball->precision().bits));
    Ball A = inst.A.eval(wp);
    Ball B = inst.B.eval(wp);
    if (!A.is_positive()) throw DomainError("dp_reduce: A not certified > 0");
    Ball logB = log(B);
    if (!logB.is_positive())
      throw DomainError("dp_reduce: B not certified > 1");
    Ball w = log(A * Ball::from_integer(c.q, wp) / *eps_ball) / logB;

    ReductionResult res;
    res.kind = ReductionResult::Kind::Reduced;
    res.convergent_index = idx;
    res.q_used = c.q;
    res.epsilon = *eps_ball;
    res.w_bound = ceil_of_upper(w);
    if (res.w_bound < 1) res.w_bound = 1;
    return res;
  }

  if (!opt.scan_relations) {
    if (auto rel = scan_integer_relation(inst.gamma, inst.mu)) {
      ReductionResult res;
      res.kind = ReductionResult::Kind::Degenerate;
      res.relation = rel;
      res.note = "degenerate after advancement";
      return res;
    }
  }
  throw CertificationError(
      "dp_reduce: no convergent certified epsilon > 0 within max_advance=" +
      std::to_string(opt.max_advance));
}

mpz_class legendre_bound(const RealValue& gamma, const mpz_class& M,
                         const RealValue& A, const RealValue& B,
                         const ReduceOptions& opt) {
  if (M < 1) throw DomainError("legendre_bound: M must be >= 1");
  ExpandOptions eo;
  eo.start = opt.start;
  eo.cap = opt.cap;
  eo.cache = opt.cache;
  auto [a_max, index] = max_quotient_for_denominators_below(gamma, M, eo);

  PrecisionSpec p = opt.start;
  Ball Ab = A.eval(p);
  Ball Bb = B.eval(p);
  if (!Ab.is_positive()) throw DomainError("legendre_bound: A not > 0");
  Ball logB = log(Bb);
  if (!logB.is_positive()) throw DomainError("legendre_bound: B not > 1");
  Ball rhs = Ab * Ball::from_integer((a_max + 2) * M, p);
  mpz_class w = ceil_of_upper(log(rhs) / logB);
  return w < 1 ? mpz_class(1) : w;
}

}  // namespace lucasrep
