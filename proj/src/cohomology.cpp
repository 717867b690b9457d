#include "zoll/cohomology.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "zoll/error.hpp"

namespace zoll {

namespace {

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

void swap_rows(IntegerMatrix& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntegerMatrix& m, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row_target += factor * row_source
void add_row(IntegerMatrix& m, int target, int source, const BigInt& factor) {
  if (factor == 0) return;
  for (int j = 0; j < m.cols(); ++j) m(target, j) += factor * m(source, j);
}

void add_col(IntegerMatrix& m, int target, int source, const BigInt& factor) {
  if (factor == 0) return;
  for (int i = 0; i < m.rows(); ++i) m(i, target) += factor * m(i, source);
}

void negate_row(IntegerMatrix& m, int r) {
  for (int j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

const FGAbelianGroup& entry(const CohomologyTable& t, int j) {
  static const FGAbelianGroup zero;
  return (j >= 0 && j < static_cast<int>(t.size())) ? t[j] : zero;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InconsistentChase, what);
}

IntegerMatrix one_by_one(const BigInt& value) {
  IntegerMatrix m(1, 1);
  m(0, 0) = value;
  return m;
}

}  // namespace

FGAbelianGroup FGAbelianGroup::from_cyclic(const std::vector<BigInt>& orders) {
  FGAbelianGroup g;
  std::vector<BigInt> finite;
  for (const BigInt& d : orders) {
    if (d == 0) {
      ++g.rank_;
    } else if (abs_big(d) != 1) {
      finite.push_back(abs_big(d));
    }
  }
  if (!finite.empty()) {
    IntegerMatrix diag(static_cast<int>(finite.size()), static_cast<int>(finite.size()));
    for (std::size_t i = 0; i < finite.size(); ++i) diag(static_cast<int>(i), static_cast<int>(i)) = finite[i];
    for (const BigInt& d : smith_normal_form(diag).diagonal) {
      if (d != 1) g.torsion_.push_back(d);
    }
  }
  return g;
}

FGAbelianGroup FGAbelianGroup::operator+(const FGAbelianGroup& other) const {
  std::vector<BigInt> orders(rank_ + other.rank_, 0);
  orders.insert(orders.end(), torsion_.begin(), torsion_.end());
  orders.insert(orders.end(), other.torsion_.begin(), other.torsion_.end());
  return from_cyclic(orders);
}

std::string FGAbelianGroup::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  if (rank_ > 0) {
    out << "Z";
    if (rank_ > 1) out << "^" << rank_;
    first = false;
  }
  for (const BigInt& d : torsion_) {
    if (!first) out << " + ";
    out << "Z/" << d;
    first = false;
  }
  return out.str();
}

std::string FGAbelianGroup::torsion_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < torsion_.size(); ++i) out << (i ? ";" : "") << torsion_[i];
  return out.str();
}

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    : rows_(static_cast<int>(rows.size())), cols_(rows.size() ? static_cast<int>(rows.begin()->size()) : 0) {
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != cols_) throw Error(ErrorCode::InvalidArgument, "ragged integer matrix");
    for (long long v : row) data_.emplace_back(v);
  }
}

IntegerMatrix IntegerMatrix::identity(int size) {
  IntegerMatrix m(size, size);
  for (int i = 0; i < size; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& other) const {
  if (cols_ != other.rows_) throw Error(ErrorCode::InvalidArgument, "integer matrix size mismatch");
  IntegerMatrix out(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (int j = 0; j < other.cols_; ++j) out(i, j) += (*this)(i, k) * other(k, j);
    }
  }
  return out;
}

IntegerMatrix IntegerMatrix::operator+(const IntegerMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::InvalidArgument, "integer matrix size mismatch");
  IntegerMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += other.data_[k];
  return out;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

IntegerMatrix IntegerMatrix::scaled(const BigInt& factor) const {
  IntegerMatrix out = *this;
  for (BigInt& v : out.data_) v *= factor;
  return out;
}

bool IntegerMatrix::operator==(const IntegerMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

bool IntegerMatrix::is_diagonal() const {
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

BigInt IntegerMatrix::determinant() const {
  if (rows_ != cols_) throw Error(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  if (rows_ == 0) return 1;
  IntegerMatrix m = *this;
  BigInt sign = 1;
  BigInt previous = 1;
  for (int k = 0; k < rows_ - 1; ++k) {
    if (m(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < rows_; ++i)
        if (m(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      swap_rows(m, k, swap);
      sign = -sign;
    }
    for (int i = k + 1; i < rows_; ++i) {
      for (int j = k + 1; j < rows_; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / previous;
    }
    previous = m(k, k);
  }
  return sign * m(rows_ - 1, rows_ - 1);
}

IntegerMatrix IntegerMatrix::kronecker(const IntegerMatrix& a, const IntegerMatrix& b) {
  IntegerMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

SmithForm smith_normal_form(const IntegerMatrix& A) {
  SmithForm f;
  f.S = A;
  f.U = IntegerMatrix::identity(A.rows());
  f.V = IntegerMatrix::identity(A.cols());
  IntegerMatrix& S = f.S;
  const int rows = A.rows(), cols = A.cols();
  int t = 0;
  for (; t < std::min(rows, cols); ++t) {
    while (true) {
      // Smallest nonzero magnitude in the trailing block becomes the pivot.
      int pi = -1, pj = -1;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j)
          if (S(i, j) != 0 && (pi < 0 || abs_big(S(i, j)) < abs_big(S(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) goto done;
      swap_rows(S, t, pi);
      swap_rows(f.U, t, pi);
      swap_cols(S, t, pj);
      swap_cols(f.V, t, pj);

      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        const BigInt q = S(i, t) / S(t, t);
        add_row(S, i, t, -q);
        add_row(f.U, i, t, -q);
        if (S(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < cols; ++j) {
        const BigInt q = S(t, j) / S(t, t);
        add_col(S, j, t, -q);
        add_col(f.V, j, t, -q);
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      int bad = -1;
      for (int i = t + 1; i < rows && bad < 0; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (S(i, j) % S(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      add_row(S, t, bad, 1);
      add_row(f.U, t, bad, 1);
    }
    if (S(t, t) < 0) {
      negate_row(S, t);
      negate_row(f.U, t);
    }
  }
done:
  for (int k = 0; k < std::min(rows, cols); ++k) {
    if (S(k, k) != 0) {
      ++f.rank;
      f.diagonal.push_back(S(k, k));
    }
  }
  return f;
}

FGAbelianGroup cokernel(const IntegerMatrix& A) {
  const SmithForm f = smith_normal_form(A);
  std::vector<BigInt> orders(A.rows() - f.rank, 0);
  orders.insert(orders.end(), f.diagonal.begin(), f.diagonal.end());
  return FGAbelianGroup::from_cyclic(orders);
}

int kernel_rank(const IntegerMatrix& A) { return A.cols() - smith_normal_form(A).rank; }

IntegerMatrix kernel_basis(const IntegerMatrix& A) {
  const SmithForm f = smith_normal_form(A);
  IntegerMatrix basis(A.cols(), A.cols() - f.rank);
  for (int k = f.rank; k < A.cols(); ++k)
    for (int i = 0; i < A.cols(); ++i) basis(i, k - f.rank) = f.V(i, k);
  return basis;
}

CohomologyTable cpn_cohomology(int n) {
  CohomologyTable t(2 * n + 1);
  for (int k = 0; k <= n; ++k) t[2 * k] = FGAbelianGroup::free(1);
  return t;
}

CohomologyTable sphere_gysin(const CohomologyTable& H_M, const BigInt& euler) {
  const int dim_m = static_cast<int>(H_M.size()) - 1;
  if (dim_m < 2 || dim_m % 2 != 0) throw Error(ErrorCode::InvalidArgument, "base must have even dimension 2n >= 2");
  for (const auto& g : H_M) {
    if (!g.is_free() || g.rank() > 1) throw Error(ErrorCode::InvalidArgument, "base cohomology must be that of CP^n");
  }
  // Cup with the Euler class, H^k(M) -> H^{k + 2n}(M): multiplication by `euler` from H^0 to H^{2n}, zero otherwise.
  const auto cup = [&](int k) {
    const int src = entry(H_M, k).rank();
    const int dst = entry(H_M, k + dim_m).rank();
    IntegerMatrix m(dst, src);
    if (k == 0 && src == 1 && dst == 1) m(0, 0) = euler;
    return m;
  };
  const int dim_um = 2 * dim_m - 1;
  CohomologyTable H(dim_um + 1);
  for (int j = 0; j <= dim_um; ++j) {
    // 0 -> coker(H^{j-2n}(M) -> H^j(M)) -> H^j(UM) -> ker(H^{j-2n+1}(M) -> H^{j+1}(M)) -> 0; the kernel is free.
    FGAbelianGroup left = j - dim_m >= 0 ? cokernel(cup(j - dim_m)) : entry(H_M, j);
    const int right = j - dim_m + 1 >= 0 ? kernel_rank(cup(j - dim_m + 1)) : 0;
    H[j] = left + FGAbelianGroup::free(right);
  }
  return H;
}

CohomologyTable circle_gysin(const CohomologyTable& H_UM) {
  const int dim_um = static_cast<int>(H_UM.size()) - 1;
  require(dim_um >= 3 && (dim_um + 1) % 4 == 0, "unit tangent bundle must have dimension 4n - 1");
  const int n = (dim_um + 1) / 4;
  const int dim_d = 4 * n - 2;
  CohomologyTable H(dim_d + 1);
  std::vector<bool> known(dim_d + 1, false);
  const auto set = [&](int j, FGAbelianGroup g) {
    H[j] = std::move(g);
    known[j] = true;
  };

  // Odd degrees.  H^{2j-1}(D) -> H^{2j+1}(D) -> H^{2j+1}(UM), upwards from H^{-1}(D) = 0.
  for (int j = 0; j <= n - 1; ++j) {
    require(entry(H_UM, 2 * j + 1).is_zero(), "H^" + std::to_string(2 * j + 1) + "(UM) must vanish");
    set(2 * j + 1, FGAbelianGroup::zero());
  }
  // H^{2j}(UM) -> H^{2j-1}(D) -> H^{2j+1}(D), downwards from H^{4n-1}(D) = 0.
  for (int j = 2 * n - 1; j >= n + 1; --j) {
    require(entry(H_UM, 2 * j).is_zero(), "H^" + std::to_string(2 * j) + "(UM) must vanish");
    set(2 * j - 1, FGAbelianGroup::zero());
  }

  // Even degrees.  0 -> H^{2j-2}(D) -> H^{2j}(D) -> H^{2j}(UM) -> 0 for 1 <= j <= n - 1.
  set(0, FGAbelianGroup::free(1));
  for (int j = 1; j <= n - 1; ++j) {
    require(entry(H_UM, 2 * j - 1).is_zero(), "H^" + std::to_string(2 * j - 1) + "(UM) must vanish");
    require(entry(H_UM, 2 * j).is_free(), "H^" + std::to_string(2 * j) + "(UM) must be free");
    set(2 * j, H[2 * j - 2] + entry(H_UM, 2 * j));
  }
  // 0 -> H^{2j-1}(UM) -> H^{2j-2}(D) -> H^{2j}(D) -> 0 for n + 1 <= j <= 2n - 1, downwards from H^{4n-2}(D) = Z.
  set(dim_d, FGAbelianGroup::free(1));
  for (int j = 2 * n - 1; j >= n + 1; --j) {
    require(entry(H_UM, 2 * j - 1).is_free(), "H^" + std::to_string(2 * j - 1) + "(UM) must be free");
    set(2 * j - 2, entry(H_UM, 2 * j - 1) + H[2 * j]);
  }
  for (int j = 0; j <= dim_d; ++j) require(known[j], "degree " + std::to_string(j) + " of D not determined");

  // Middle: 0 -> H^{2n-1}(UM) -> H^{2n-2}(D) -> H^{2n}(D) -> H^{2n}(UM) -> H^{2n-1}(D) = 0.
  if (n >= 1) {
    const int alternating = entry(H_UM, 2 * n - 1).rank() - entry(H, 2 * n - 2).rank() + entry(H, 2 * n).rank() -
                            entry(H_UM, 2 * n).rank();
    require(alternating == 0, "rank count fails in the middle segment of the circle Gysin sequence");
    require(entry(H, 2 * n - 1).is_zero(), "H^{2n-1}(D) must vanish");
  }
  return H;
}

CohomologyTable mayer_vietoris_X(const CohomologyTable& H_D, const CohomologyTable& H_M, const CohomologyTable& H_UM) {
  const int dim_m = static_cast<int>(H_M.size()) - 1;
  const int n = dim_m / 2;
  require(static_cast<int>(H_UM.size()) == 4 * n && static_cast<int>(H_D.size()) == 4 * n - 1,
          "table sizes do not match dim M = 2n");
  const int dim_x = 4 * n;
  CohomologyTable H(dim_x + 1);
  for (int j = 0; j <= dim_x; ++j) {
    const FGAbelianGroup& d = entry(H_D, j);
    const FGAbelianGroup& m = entry(H_M, j);
    require(d.is_free() && m.is_free(), "D and M must have free cohomology");
    if (j <= 2 * n) {
      // 0 -> H^j(X) -> H^j(D) + H^j(M) -> H^j(UM) -> 0; a subgroup of a free group is free.
      const int rank = d.rank() + m.rank() - entry(H_UM, j).rank();
      require(rank >= 0, "negative rank in degree " + std::to_string(j));
      H[j] = FGAbelianGroup::free(rank);
    } else if (j == 2 * n + 1) {
      require(d.is_zero() && m.is_zero(), "odd groups of D and M must vanish");
      H[j] = FGAbelianGroup::zero();
    } else {
      // 0 -> H^{j-1}(UM) -> H^j(X) -> H^j(D) + H^j(M) -> 0 splits.
      H[j] = entry(H_UM, j - 1) + d + m;
    }
  }
  return H;
}

CohomologyTable closed_form_UM(int n) {
  CohomologyTable t(4 * n);
  for (int j = 0; j <= 2 * n - 2; j += 2) t[j] = FGAbelianGroup::free(1);
  t[2 * n] = FGAbelianGroup::from_cyclic({BigInt(n + 1)});
  for (int j = 2 * n + 1; j <= 4 * n - 1; j += 2) t[j] = FGAbelianGroup::free(1);
  return t;
}

CohomologyTable closed_form_D(int n) {
  CohomologyTable t(4 * n - 1);
  for (int j = 0; j <= 2 * n - 2; j += 2) t[j] = FGAbelianGroup::free(j / 2 + 1);
  for (int j = 2 * n; j <= 4 * n - 2; j += 2) t[j] = FGAbelianGroup::free(2 * n - j / 2);
  return t;
}

CohomologyTable closed_form_X(int n) {
  CohomologyTable t(4 * n + 1);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) t[2 * (a + b)] = t[2 * (a + b)] + FGAbelianGroup::free(1);
  return t;
}

int euler_characteristic(const CohomologyTable& table) {
  int chi = 0;
  for (std::size_t j = 0; j < table.size(); ++j) chi += (j % 2 == 0 ? 1 : -1) * table[j].rank();
  return chi;
}

CohomologyReport compute_cohomology(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  CohomologyReport r;
  r.n = n;
  r.M = cpn_cohomology(n);
  r.UM = sphere_gysin(r.M, BigInt(n + 1));
  r.D = circle_gysin(r.UM);
  r.X = mayer_vietoris_X(r.D, r.M, r.UM);
  const auto count = [](const CohomologyTable& a, const CohomologyTable& b) {
    int bad = static_cast<int>(std::max(a.size(), b.size()) - std::min(a.size(), b.size()));
    for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) bad += a[j] != b[j];
    return bad;
  };
  r.mismatches = count(r.UM, closed_form_UM(n)) + count(r.D, closed_form_D(n)) + count(r.X, closed_form_X(n));
  return r;
}

CohomologyTable cochain_cohomology(const std::vector<int>& dims, const std::vector<IntegerMatrix>& differentials) {
  const int top = static_cast<int>(dims.size());
  CohomologyTable H(top);
  std::vector<SmithForm> forms;
  for (int k = 0; k < top; ++k) {
    if (k < static_cast<int>(differentials.size()) && differentials[k].rows() > 0 && differentials[k].cols() > 0) {
      forms.push_back(smith_normal_form(differentials[k]));
    } else {
      forms.emplace_back();
    }
  }
  for (int k = 0; k < top; ++k) {
    const int cycles = dims[k] - forms[k].rank;
    const int boundaries = k > 0 ? forms[k - 1].rank : 0;
    std::vector<BigInt> orders(cycles - boundaries, 0);
    if (k > 0) orders.insert(orders.end(), forms[k - 1].diagonal.begin(), forms[k - 1].diagonal.end());
    H[k] = FGAbelianGroup::from_cyclic(orders);
  }
  return H;
}

CochainComplex rp_cochains(int n) {
  CochainComplex c;
  c.dims.assign(n + 1, 1);
  for (int k = 0; k < n; ++k) c.differentials.push_back(one_by_one(k % 2 == 1 ? 2 : 0));
  return c;
}

CochainComplex tensor(const CochainComplex& a, const CochainComplex& b) {
  const int na = static_cast<int>(a.dims.size());
  const int nb = static_cast<int>(b.dims.size());
  CochainComplex c;
  if (na == 0 || nb == 0) return c;
  const int top = na + nb - 1;
  // Degree k is the direct sum of A^p (x) B^{k-p}; offsets locate each summand.
  std::vector<std::vector<int>> offset(top, std::vector<int>(na, -1));
  c.dims.assign(top, 0);
  for (int k = 0; k < top; ++k) {
    for (int p = 0; p < na; ++p) {
      const int q = k - p;
      if (q < 0 || q >= nb) continue;
      offset[k][p] = c.dims[k];
      c.dims[k] += a.dims[p] * b.dims[q];
    }
  }
  const auto diff = [](const CochainComplex& x, int p) {
    return p < static_cast<int>(x.differentials.size()) ? x.differentials[p] : IntegerMatrix(0, x.dims[p]);
  };
  for (int k = 0; k + 1 < top; ++k) {
    IntegerMatrix d(c.dims[k + 1], c.dims[k]);
    for (int p = 0; p < na; ++p) {
      const int q = k - p;
      if (q < 0 || q >= nb) continue;
      const auto place = [&](const IntegerMatrix& block, int target_p) {
        const int row0 = offset[k + 1][target_p];
        const int col0 = offset[k][p];
        for (int i = 0; i < block.rows(); ++i)
          for (int j = 0; j < block.cols(); ++j) d(row0 + i, col0 + j) += block(i, j);
      };
      if (p + 1 < na) place(IntegerMatrix::kronecker(diff(a, p), IntegerMatrix::identity(b.dims[q])), p + 1);
      if (q + 1 < nb) {
        const IntegerMatrix block = IntegerMatrix::kronecker(IntegerMatrix::identity(a.dims[p]), diff(b, q));
        place(p % 2 == 0 ? block : block.scaled(-1), p);
      }
    }
    c.differentials.push_back(d);
  }
  return c;
}

EigenspaceVerdict eigenspace_argument(int d) {
  EigenspaceVerdict v;
  v.d = d;
  v.action = IntegerMatrix{{1, -d}, {0, -1}};
  v.squares_to_identity = v.action * v.action == IntegerMatrix::identity(2);
  const IntegerMatrix shifted = v.action.transpose() + IntegerMatrix::identity(2);
  v.eigenspace = kernel_basis(shifted);
  v.eigenspace_rank = v.eigenspace.cols();
  if (v.eigenspace_rank == 1) {
    // omega = (0, 1) lies in the saturated line spanned by the basis vector.
    v.contains_omega = v.eigenspace(0, 0) == 0 && abs_big(v.eigenspace(1, 0)) == 1;
  }
  return v;
}

}  // namespace zoll
