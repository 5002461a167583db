#include "lucasrep/contfrac.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace lucasrep {

namespace {

std::string sanitize_id(const std::string& id) {
  std::string out;
  for (char c : id) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ||
        c == '=')
      out += c;
    else
      out += '_';
  }
  // short hash suffix to keep distinct ids from colliding after sanitizing
  std::size_t h = std::hash<std::string>{}(id);
  std::ostringstream suffix;
  suffix << std::hex << (h & 0xffff);
  return out + "-" + suffix.str() + ".cf";
}

std::vector<mpz_class> euclid_quotients(const mpq_class& v,
                                        std::size_t want) {
  std::vector<mpz_class> out;
  mpz_class num = v.get_num(), den = v.get_den();
  // floor division steps of the Euclidean algorithm
  while (den != 0 && out.size() < want) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(),
                den.get_mpz_t());
    out.push_back(q);
    num = den;
    den = r;
  }
  return out;
}

// Checks p_i q_{i-1} - p_{i-1} q_i = (-1)^(i-1) over the whole prefix.
bool determinant_identity_holds(const std::vector<Convergent>& cs) {
  mpz_class pm1 = 1, qm1 = 0;  // index -1
  for (std::size_t i = 0; i < cs.size(); ++i) {
    mpz_class det = cs[i].p * qm1 - pm1 * cs[i].q;
    if (det != ((i % 2 == 0) ? -1 : 1)) return false;
    pm1 = cs[i].p;
    qm1 = cs[i].q;
  }
  return true;
}

std::vector<Convergent> convergents_of(const std::vector<mpz_class>& quots,
                                       std::size_t count) {
  std::vector<Convergent> out;
  out.reserve(count);
  mpz_class pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0;
  for (std::size_t i = 0; i < count && i < quots.size(); ++i) {
    mpz_class p = quots[i] * pm1 + pm2;
    mpz_class q = quots[i] * qm1 + qm2;
    out.push_back({i, p, q});
    pm2 = pm1;
    pm1 = p;
    qm2 = qm1;
    qm1 = q;
  }
  return out;
}

// |x - p/q| < 1/q^2, certified with a fresh enclosure of x.
bool best_approx_holds(const RealValue& x, const Convergent& c,
                       unsigned bits) {
  Ball xb = x.eval(PrecisionSpec(std::max(bits, PrecisionSpec::kMinBits)));
  Ball diff = abs(xb - Ball::from_rational(mpq_class(c.p, c.q),
                                           xb.precision()));
  Ball rhs = inverse(Ball::from_integer(c.q * c.q, xb.precision()));
  return certified_less(diff, rhs);
}

bool verify_loaded(const RealValue& x, const CFExpansion& e) {
  if (e.certified_count == 0 || e.quotients.size() < e.certified_count)
    return false;
  for (std::size_t i = 1; i < e.certified_count; ++i)
    if (e.quotients[i] < 1) return false;
  auto cs = convergents_of(e.quotients, e.certified_count);
  if (!determinant_identity_holds(cs)) return false;
  // first convergent: |x - a0| < 1
  Ball xb = x.eval(PrecisionSpec(std::max(e.precision_bits, 64u)));
  Ball d0 = abs(xb - Ball::from_integer(e.quotients[0], xb.precision()));
  if (!certified_less(d0, Ball::exact(1, xb.precision()))) return false;
  if (cs.size() >= 2 && !best_approx_holds(x, cs.back(), e.precision_bits))
    return false;
  return true;
}

}  // namespace

ExpansionCache::ExpansionCache(std::filesystem::path dir)
    : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::filesystem::path ExpansionCache::path_for(
    const std::string& value_id) const {
  return dir_ / sanitize_id(value_id);
}

std::optional<CFExpansion> ExpansionCache::load(
    const std::string& value_id) const {
  if (!enabled()) return std::nullopt;
  std::lock_guard lock(mutex_);
  std::ifstream in(path_for(value_id));
  if (!in) return std::nullopt;
  std::string header;
  if (!std::getline(in, header)) return std::nullopt;
  std::replace(header.begin(), header.end(), ',', ' ');
  std::istringstream hs(header);
  CFExpansion e;
  std::size_t count = 0;
  if (!(hs >> e.value_id >> e.precision_bits >> count)) return std::nullopt;
  if (e.value_id != value_id) return std::nullopt;
  std::string line;
  while (std::getline(in, line) && e.quotients.size() < count) {
    if (line.empty()) continue;
    try {
      e.quotients.emplace_back(line);
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  }
  if (e.quotients.size() != count) return std::nullopt;
  e.certified_count = count;
  return e;
}

void ExpansionCache::store(const CFExpansion& e) const {
  if (!enabled()) return;
  std::lock_guard lock(mutex_);
  static std::mt19937_64 rng(std::random_device{}());
  std::filesystem::path tmp =
      dir_ / ("tmp-" + std::to_string(rng()) + ".part");
  {
    std::ofstream out(tmp);
    out << e.value_id << "," << e.precision_bits << "," << e.certified_count
        << "\n";
    for (std::size_t i = 0; i < e.certified_count; ++i)
      out << e.quotients[i].get_str() << "\n";
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path_for(e.value_id), ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

CFExpansion expand(const RealValue& x, std::size_t want,
                   const ExpandOptions& opt) {
  if (want == 0) throw DomainError("expand: want must be >= 1");

  if (x.exact) {
    CFExpansion e;
    e.value_id = x.id;
    e.precision_bits = 0;
    e.quotients = euclid_quotients(*x.exact, want);
    e.certified_count = e.quotients.size();
    return e;  // may be shorter than `want`: rational expansions terminate
  }

  std::optional<CFExpansion> cached;
  if (opt.cache) {
    cached = opt.cache->load(x.id);
    if (cached && !verify_loaded(x, *cached)) cached.reset();
    if (cached && cached->certified_count >= want) {
      cached->quotients.resize(want);
      cached->certified_count = want;
      return *cached;
    }
  }

  unsigned start =
      std::max({opt.start.bits, cached ? cached->precision_bits : 0u,
                PrecisionSpec::kMinBits});
  CFExpansion e = escalate(
      PrecisionSpec(start), opt.cap,
      [&](PrecisionSpec p) -> std::optional<CFExpansion> {
        CFExpansion out;
        out.value_id = x.id;
        out.precision_bits = p.bits;
        Ball X = x.eval(p);
        while (out.quotients.size() < want) {
          auto f = floor_if_certain(X);
          if (!f) return std::nullopt;
          out.quotients.push_back(*f);
          if (out.quotients.size() >= want) break;
          Ball frac = X - Ball::from_integer(*f, X.precision());
          if (!frac.is_positive()) return std::nullopt;
          X = inverse(frac);
        }
        out.certified_count = out.quotients.size();
        return out;
      });

  // a certified prefix can only be extended, never contradicted
  if (cached) {
    for (std::size_t i = 0; i < cached->certified_count; ++i)
      if (e.quotients[i] != cached->quotients[i])
        throw CertificationError("expand: cached prefix contradicted for " +
                                 x.id);
  }
  if (opt.cache) opt.cache->store(e);
  return e;
}

Convergent convergent(const CFExpansion& e, std::size_t i) {
  if (i >= e.certified_count)
    throw DomainError("convergent: index beyond certified prefix");
  auto cs = convergents_of(e.quotients, i + 1);
  return cs.back();
}

std::vector<Convergent> convergents(const CFExpansion& e, std::size_t count) {
  return convergents_of(e.quotients, std::min(count, e.certified_count));
}

Convergent first_q_exceeding(const RealValue& x, const mpz_class& bound,
                             const ExpandOptions& opt) {
  if (bound < 1) throw DomainError("first_q_exceeding: bound must be >= 1");
  std::size_t want = 32;
  while (true) {
    CFExpansion e = expand(x, want, opt);
    mpz_class pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0;
    for (std::size_t i = 0; i < e.certified_count; ++i) {
      mpz_class p = e.quotients[i] * pm1 + pm2;
      mpz_class q = e.quotients[i] * qm1 + qm2;
      if (q > bound) return {i, p, q};
      pm2 = pm1;
      pm1 = p;
      qm2 = qm1;
      qm1 = q;
    }
    if (e.certified_count < want)  // terminated rational expansion
      throw CertificationError("first_q_exceeding: expansion exhausted");
    want *= 2;
  }
}

mpz_class max_partial_quotient(const RealValue& x, std::size_t index_limit,
                               const ExpandOptions& opt) {
  if (index_limit < 2)
    throw DomainError("max_partial_quotient: index_limit must be >= 2");
  CFExpansion e = expand(x, index_limit, opt);
  if (e.certified_count < index_limit)
    throw CertificationError("max_partial_quotient: expansion too short");
  mpz_class mx = e.quotients[1];
  for (std::size_t i = 2; i < index_limit; ++i)
    if (e.quotients[i] > mx) mx = e.quotients[i];
  return mx;
}

std::pair<mpz_class, std::size_t> max_quotient_for_denominators_below(
    const RealValue& x, const mpz_class& bound, const ExpandOptions& opt) {
  Convergent first = first_q_exceeding(x, bound, opt);
  CFExpansion e = expand(x, first.index + 1, opt);
  mpz_class mx = 1;
  for (std::size_t i = 1; i <= first.index; ++i)
    if (e.quotients[i] > mx) mx = e.quotients[i];
  return {mx, first.index};
}

}  // namespace lucasrep
