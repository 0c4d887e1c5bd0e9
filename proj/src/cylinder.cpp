#include "ckn/cylinder.hpp"

#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "disc_internal.hpp"

namespace ckn {

namespace {
constexpr int kStencilHalf = 4;
constexpr double kMaxSpacing = 0.05;
}  // namespace

Grid Grid::make(double S, int N) {
  if (N < 129 || N % 2 == 0) throw std::invalid_argument("Grid: N must be odd and >= 129");
  if (!(S > 0.0) || !std::isfinite(S)) throw std::invalid_argument("Grid: S must be positive");
  Grid g;
  g.S = S;
  g.N = N;
  g.h = 2.0 * S / (N - 1);
  if (g.h > kMaxSpacing * (1.0 + 1e-12))
    throw std::invalid_argument("Grid: spacing h=" + std::to_string(g.h) + " exceeds 0.05");
  return g;
}

Grid Grid::default_for(const CknParams& prm) {
  const double S = std::max(30.0 / prm.sqrt_lambda(),
                            std::acosh(std::exp(15.0 * (prm.p - 2.0))) / prm.alpha);
  int N = 4097;
  const int need = static_cast<int>(std::ceil(2.0 * S / kMaxSpacing)) + 1;
  if (need > N) N = need % 2 ? need : need + 1;
  return make(S, N);
}

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd s(N);
  for (int i = 0; i < N; ++i) s(i) = this->s(i);
  s(center()) = 0.0;
  return s;
}

SphereQuad SphereQuad::make(int n, int M, int L) {
  if (n < 2) throw std::invalid_argument("SphereQuad: n must be >= 2");
  if (M < 2 || L < 0 || 2 * L > 2 * M - 1)
    throw std::invalid_argument("SphereQuad: need M >= 2 and 2L <= 2M-1");
  SphereQuad q;
  q.n = n;
  q.M = M;
  q.L = L;
  q.x.resize(M);
  q.w.resize(M);
  if (n == 2) {
    for (int j = 0; j < M; ++j) {
      q.x(j) = std::cos((j + 0.5) * std::numbers::pi / M);
      q.w(j) = 2.0 * std::numbers::pi / M;
    }
  } else {
    const double a = 0.5 * (n - 3);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(M, M);
    for (int k = 1; k < M; ++k) {
      const double b = k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0));
      J(k, k - 1) = J(k - 1, k) = std::sqrt(b);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(a + 1.0) / std::tgamma(a + 1.5);
    const double lower = sphere_area(n - 1);
    for (int j = 0; j < M; ++j) {
      q.x(j) = es.eigenvalues()(j);
      const double v = es.eigenvectors()(0, j);
      q.w(j) = lower * mu0 * v * v;
    }
  }
  // raw zonal polynomials, then discrete normalization
  q.Y.resize(M, L + 1);
  const double lam = 0.5 * (n - 2);
  for (int j = 0; j < M; ++j) {
    const double x = q.x(j);
    double cm = 1.0, c = (n == 2) ? x : 2.0 * lam * x;
    q.Y(j, 0) = 1.0;
    if (L >= 1) q.Y(j, 1) = c;
    for (int k = 1; k < L; ++k) {
      double cp;
      if (n == 2)
        cp = 2.0 * x * c - cm;
      else
        cp = (2.0 * (k + lam) * x * c - (k + 2.0 * lam - 1.0) * cm) / (k + 1.0);
      q.Y(j, k + 1) = cp;
      cm = c;
      c = cp;
    }
  }
  for (int l = 0; l <= L; ++l) {
    const double nrm = std::sqrt((q.w.array() * q.Y.col(l).array().square()).sum());
    q.Y.col(l) /= nrm;
  }
  return q;
}

double sphere_moment(int n, int k) {
  if (n < 2 || k < 0) throw std::invalid_argument("sphere_moment: need n >= 2, k >= 0");
  double m = sphere_area(n);
  for (int j = 1; j <= k; ++j) m *= (2.0 * j - 1.0) / (n + 2.0 * j - 2.0);
  return m;
}

namespace detail {

std::vector<double> central_stencil(int q) {
  std::vector<double> st(2 * q + 1, 0.0);
  std::vector<double> cur{1.0};
  double binom = 1.0;  // C(2k, k)
  for (int k = 1; k <= q; ++k) {
    binom = binom * (2.0 * k) * (2.0 * k - 1.0) / (k * k);
    const double ck = 2.0 / (k * k * binom);
    std::vector<double> next(cur.size() + 2, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i] -= cur[i];
      next[i + 1] += 2.0 * cur[i];
      next[i + 2] -= cur[i];
    }
    cur = next;
    const int pad = q - k;
    for (std::size_t i = 0; i < cur.size(); ++i) st[pad + i] += ck * cur[i];
  }
  return st;
}

SymBand axial_band(const Discretization& d, double shift, double kscale) {
  SymBand a = band_from_stencil(d.N(), d.stencil(), kscale / (d.h() * d.h()));
  a.ab.row(0).array() += shift;
  return a;
}

}  // namespace detail

Discretization::~Discretization() = default;

std::shared_ptr<const Discretization> Discretization::make(const CknParams& prm,
                                                           const DiscOptions& opt) {
  std::shared_ptr<Discretization> d(new Discretization());
  d->prm_ = prm;
  d->opt_ = opt;
  const Grid def = Grid::default_for(prm);
  const double S = opt.S > 0 ? opt.S : def.S;
  int N = opt.N;
  if (N <= 0) {
    N = def.N;
    const int need = static_cast<int>(std::ceil(2.0 * S / kMaxSpacing)) + 1;
    if (need > N) N = need % 2 ? need : need + 1;
  }
  d->grid_ = Grid::make(S, N);
  if (S < 20.0 / prm.sqrt_lambda() * (1.0 - 1e-12))
    throw std::invalid_argument("Discretization: S below 20/sqrt(Lambda)");
  d->opt_.N = N;
  d->opt_.S = S;
  d->quad_ = SphereQuad::make(prm.n, opt.M, opt.L);
  d->s_ = d->grid_.nodes();
  d->V0_ = d->bubble(0.0);
  d->stencil_ = detail::central_stencil(kStencilHalf);
  for (int l = 0; l <= opt.L; ++l) {
    auto band = detail::axial_band(*d, d->lambda(l) + prm.Lambda);
    auto f = std::make_shared<detail::BandCholesky>(band);
    if (!f->ok()) throw NumericalError("Discretization: H1 operator not positive definite");
    if (f->rcond() < 1e-12)
      throw NumericalError("Discretization: H1 operator condition number exceeds 1e12 at degree " +
                           std::to_string(l));
    d->chol_.push_back(f);
  }
  return d;
}

Eigen::VectorXd Discretization::bubble(double t) const {
  Eigen::VectorXd v(N());
  for (int i = 0; i < N(); ++i) v(i) = bubble_value(prm_, s_(i), t);
  return v;
}

Eigen::VectorXd Discretization::bubble_ds(double t) const {
  Eigen::VectorXd v(N());
  for (int i = 0; i < N(); ++i) v(i) = bubble_derivative(prm_, s_(i), t);
  return v;
}

Eigen::VectorXd Discretization::apply_K(const Eigen::VectorXd& v) const {
  const int n = N();
  const double inv = 1.0 / (h() * h());
  Eigen::VectorXd out = stencil_[kStencilHalf] * v;
  for (int k = 1; k <= kStencilHalf; ++k) {
    const double c = stencil_[kStencilHalf + k];
    out.head(n - k) += c * v.tail(n - k);
    out.tail(n - k) += c * v.head(n - k);
  }
  return out * inv;
}

Eigen::VectorXd Discretization::apply_A(int ell, const Eigen::VectorXd& v) const {
  return apply_K(v) + (lambda(ell) + prm_.Lambda) * v;
}

Eigen::VectorXd Discretization::solve_A(int ell, const Eigen::VectorXd& f) const {
  return chol_.at(ell)->solve(f);
}

double Discretization::rcond_A(int ell) const { return chol_.at(ell)->rcond(); }

std::string Discretization::signature() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "n=%d;p=%.17g;S=%.17g;N=%d;L=%d;M=%d;fd=8", prm_.n, prm_.p,
                grid_.S, grid_.N, L(), quad_.M);
  return buf;
}

std::shared_ptr<const Discretization> Discretization::refined() const {
  DiscOptions o = opt_;
  o.N = 2 * grid_.N - 1;
  o.M = 2 * quad_.M;
  return make(prm_, o);
}

std::shared_ptr<const Discretization> Discretization::with_L(int L) const {
  DiscOptions o = opt_;
  o.L = L;
  return make(prm_, o);
}

// ---------------------------------------------------------------- ZonalField

ZonalField::ZonalField(DiscPtr d) : d_(std::move(d)) {
  P_ = Eigen::MatrixXd::Zero(d_->N(), d_->L() + 1);
}

ZonalField::ZonalField(DiscPtr d, Eigen::MatrixXd profiles) : d_(std::move(d)), P_(std::move(profiles)) {
  if (P_.rows() != d_->N() || P_.cols() != d_->L() + 1)
    throw std::invalid_argument("ZonalField: profile matrix shape mismatch");
  if (!P_.allFinite()) throw std::invalid_argument("ZonalField: non-finite profile entries");
}

ZonalField ZonalField::radial(DiscPtr d, const Eigen::VectorXd& g) {
  return from_profile(d, 0, g * std::sqrt(d->params().sphere()));
}

ZonalField ZonalField::from_profile(DiscPtr d, int ell, const Eigen::VectorXd& g) {
  if (ell < 0 || ell > d->L()) throw std::invalid_argument("from_profile: degree out of range");
  if (g.size() != d->N()) throw std::invalid_argument("from_profile: length mismatch");
  ZonalField f(d);
  f.P_.col(ell) = g;
  return f;
}

ZonalField ZonalField::separable(DiscPtr d, const Eigen::VectorXd& g,
                                 const std::function<double(double)>& a) {
  const SphereQuad& q = d->quad();
  Eigen::RowVectorXd coef(q.L + 1);
  for (int l = 0; l <= q.L; ++l) {
    double c = 0.0;
    for (int j = 0; j < q.M; ++j) c += q.w(j) * a(q.x(j)) * q.Y(j, l);
    coef(l) = c;
  }
  return ZonalField(d, g * coef);
}

ZonalField ZonalField::from_function(DiscPtr d, const std::function<double(double, double)>& f) {
  const SphereQuad& q = d->quad();
  Eigen::MatrixXd vals(d->N(), q.M);
  for (int i = 0; i < d->N(); ++i)
    for (int j = 0; j < q.M; ++j) vals(i, j) = f(d->s()(i), q.x(j));
  return project(d, vals);
}

ZonalField ZonalField::bubble(DiscPtr d, double t) {
  auto v = d->bubble(t);
  return radial(std::move(d), v);
}

Eigen::MatrixXd ZonalField::synthesize() const { return P_ * d_->quad().Y.transpose(); }

ZonalField ZonalField::project(DiscPtr d, const Eigen::MatrixXd& values) {
  const SphereQuad& q = d->quad();
  Eigen::MatrixXd P = values * (q.w.asDiagonal() * q.Y);
  return ZonalField(std::move(d), std::move(P));
}

bool ZonalField::same_discretization(const ZonalField& o) const {
  return d_ == o.d_ || d_->signature() == o.d_->signature();
}

ZonalField& ZonalField::operator+=(const ZonalField& o) {
  if (!same_discretization(o)) throw std::invalid_argument("ZonalField: mismatched discretizations");
  P_ += o.P_;
  return *this;
}

ZonalField& ZonalField::operator-=(const ZonalField& o) {
  if (!same_discretization(o)) throw std::invalid_argument("ZonalField: mismatched discretizations");
  P_ -= o.P_;
  return *this;
}

ZonalField& ZonalField::operator*=(double c) {
  P_ *= c;
  return *this;
}

double h1_inner(const ZonalField& f, const ZonalField& g) {
  if (!f.same_discretization(g)) throw std::invalid_argument("h1_inner: mismatched discretizations");
  const auto& d = *f.disc();
  double acc = 0.0;
  for (int l = 0; l <= f.L(); ++l) {
    if (f.profiles().col(l).isZero(0.0) || g.profiles().col(l).isZero(0.0)) continue;
    acc += f.profiles().col(l).dot(d.apply_A(l, g.profiles().col(l)));
  }
  return d.h() * acc;
}

double h1_norm(const ZonalField& f) { return std::sqrt(std::max(0.0, h1_inner(f, f))); }

double l2_inner(const ZonalField& f, const ZonalField& g) {
  if (!f.same_discretization(g)) throw std::invalid_argument("l2_inner: mismatched discretizations");
  return f.disc()->h() * (f.profiles().array() * g.profiles().array()).sum();
}

double lp_norm(const ZonalField& f, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
  const auto& d = *f.disc();
  Eigen::MatrixXd v = f.synthesize();
  const double total = d.h() * (v.array().abs().pow(q).matrix() * d.quad().w).sum();
  return std::pow(total, 1.0 / q);
}

MapResult pointwise_map_diag(const ZonalField& f, const std::function<double(double)>& map) {
  const auto& d = *f.disc();
  Eigen::MatrixXd v = f.synthesize();
  for (Eigen::Index k = 0; k < v.size(); ++k) v.data()[k] = map(v.data()[k]);
  ZonalField out = ZonalField::project(f.disc(), v);
  const double full = (v.array().square().matrix() * d.quad().w).sum();
  const double kept = out.profiles().squaredNorm();
  const double tail = full > 0.0 ? std::max(0.0, full - kept) / full : 0.0;
  return {std::move(out), tail};
}

ZonalField pointwise_map(const ZonalField& f, const std::function<double(double)>& map) {
  return pointwise_map_diag(f, map).field;
}

void write_csv(std::ostream& os, const ZonalField& f) {
  const auto& d = *f.disc();
  char buf[64];
  os << "n,p,L,N,S\n";
  std::snprintf(buf, sizeof buf, "%.17g", d.params().p);
  os << d.params().n << ',' << buf << ',' << f.L() << ',' << d.N() << ',';
  std::snprintf(buf, sizeof buf, "%.17g", d.grid().S);
  os << buf << '\n';
  for (int l = 0; l <= f.L(); ++l) {
    for (int i = 0; i < d.N(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", f.profiles()(i, l));
      if (i) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

ZonalField read_csv(std::istream& is, int M) {
  std::string line;
  if (!std::getline(is, line) || line != "n,p,L,N,S")
    throw std::runtime_error("read_csv: missing header");
  if (!std::getline(is, line)) throw std::runtime_error("read_csv: missing values line");
  int n = 0, L = 0, N = 0;
  double p = 0.0, S = 0.0;
  char c1, c2, c3, c4;
  std::istringstream hs(line);
  if (!(hs >> n >> c1 >> p >> c2 >> L >> c3 >> N >> c4 >> S))
    throw std::runtime_error("read_csv: malformed values line");
  DiscOptions opt;
  opt.N = N;
  opt.S = S;
  opt.L = L;
  opt.M = M;
  auto d = Discretization::make(CknParams::from_pn(p, n), opt);
  Eigen::MatrixXd P(N, L + 1);
  for (int l = 0; l <= L; ++l) {
    if (!std::getline(is, line)) throw std::runtime_error("read_csv: truncated profiles");
    std::istringstream ls(line);
    std::string tok;
    for (int i = 0; i < N; ++i) {
      if (!std::getline(ls, tok, ',')) throw std::runtime_error("read_csv: short profile row");
      P(i, l) = std::stod(tok);
    }
  }
  return ZonalField(d, std::move(P));
}

}  // namespace ckn
