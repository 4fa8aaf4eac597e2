#include "fglm/design.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <sstream>

#include "fglm/errors.hpp"

namespace fglm {

namespace {

const Factor& find_factor(const std::vector<Factor>& factors, const std::string& name) {
  for (const auto& f : factors)
    if (f.name == name) return f;
  throw ConfigError("model refers to unknown factor '" + name + "'");
}

// "A:B" -> {"A","B"}; plain names pass through unchanged.
std::vector<std::string> split_term(const std::string& term) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : term) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() > 2)
    throw ConfigError("term '" + term + "': only two-way interactions are supported");
  for (const auto& p : parts)
    if (p.empty()) throw ConfigError("term '" + term + "' is malformed");
  return parts;
}

void check_levels_occupied(const Factor& f) {
  if (f.level_count() < 2)
    throw ConfigError("categorical factor '" + f.name + "' needs at least 2 levels");
  std::vector<Index> count(static_cast<std::size_t>(f.level_count()), 0);
  for (Index idx : f.level_index) ++count[static_cast<std::size_t>(idx)];
  for (Index l = 0; l < f.level_count(); ++l)
    if (count[static_cast<std::size_t>(l)] == 0)
      throw EmptyLevelError("factor '" + f.name + "': level '" +
                            f.levels[static_cast<std::size_t>(l)] + "' has no observations");
}

// Deviation (sum-to-zero) contrasts: column c is +1 on level c, -1 on the
// last level, 0 elsewhere.
Matrix deviation_columns(const Factor& f) {
  check_levels_occupied(f);
  const Index n = f.n(), last = f.level_count() - 1;
  Matrix cols = Matrix::Zero(n, last);
  for (Index i = 0; i < n; ++i) {
    const Index lev = f.level_index[static_cast<std::size_t>(i)];
    if (lev < last)
      cols(i, lev) = 1.0;
    else
      cols.row(i).setConstant(-1.0);
  }
  return cols;
}

// Maps J-1 deviation coefficients to the J level effects (last = -sum).
Matrix deviation_expansion(Index levels) {
  Matrix e = Matrix::Zero(levels, levels - 1);
  e.topRows(levels - 1).setIdentity();
  e.row(levels - 1).setConstant(-1.0);
  return e;
}

Matrix indicator_columns(const Factor& f) {
  Matrix ind = Matrix::Zero(f.n(), f.level_count());
  for (Index i = 0; i < f.n(); ++i) ind(i, f.level_index[static_cast<std::size_t>(i)]) = 1.0;
  return ind;
}

Vector centered_values(const Factor& f) {
  Vector x = Eigen::Map<const Vector>(f.values.data(), static_cast<Index>(f.values.size()));
  return x.array() - x.mean();
}

// One coded model term: contrast columns plus everything needed to recover
// and reconstruct the per-parameter effects.
struct CodedTerm {
  Matrix cols;     // n x p contrast columns
  Matrix expand;   // J x p
  Matrix carrier;  // n x J
  std::vector<std::string> labels;  // J
  std::string desc;
};

CodedTerm code_main(const Factor& f) {
  CodedTerm t;
  if (f.kind == FactorKind::categorical) {
    t.cols = deviation_columns(f);
    t.expand = deviation_expansion(f.level_count());
    t.carrier = indicator_columns(f);
    for (const auto& lev : f.levels) t.labels.push_back(f.name + "=" + lev);
    t.desc = f.name + ": deviation(" + std::to_string(f.level_count()) + " levels)";
  } else {
    t.cols = centered_values(f);
    t.expand = Matrix::Ones(1, 1);
    t.carrier = t.cols;
    t.labels = {f.name};
    t.desc = f.name + ": centered";
  }
  return t;
}

CodedTerm code_interaction(const Factor& a, const Factor& b) {
  const bool a_cat = a.kind == FactorKind::categorical;
  const bool b_cat = b.kind == FactorKind::categorical;
  CodedTerm t;
  if (a_cat && b_cat) {
    const Matrix da = deviation_columns(a), db = deviation_columns(b);
    const Matrix ea = deviation_expansion(a.level_count());
    const Matrix eb = deviation_expansion(b.level_count());
    const Index pa = da.cols(), pb = db.cols();
    // Products of the parents' contrast columns, first parent major.
    t.cols.resize(a.n(), pa * pb);
    for (Index ca = 0; ca < pa; ++ca)
      for (Index cb = 0; cb < pb; ++cb)
        t.cols.col(ca * pb + cb) = da.col(ca).cwiseProduct(db.col(cb));
    // Cell effects are the Kronecker expansion of the parent expansions; the
    // recovered effects sum to zero over every row and column of the cell
    // grid, hence over all cells.
    const Index la = a.level_count(), lb = b.level_count();
    t.expand.resize(la * lb, pa * pb);
    for (Index ra = 0; ra < la; ++ra)
      for (Index rb = 0; rb < lb; ++rb)
        for (Index ca = 0; ca < pa; ++ca)
          for (Index cb = 0; cb < pb; ++cb)
            t.expand(ra * lb + rb, ca * pb + cb) = ea(ra, ca) * eb(rb, cb);
    const Matrix ia = indicator_columns(a), ib = indicator_columns(b);
    t.carrier.resize(a.n(), la * lb);
    for (Index ra = 0; ra < la; ++ra)
      for (Index rb = 0; rb < lb; ++rb)
        t.carrier.col(ra * lb + rb) = ia.col(ra).cwiseProduct(ib.col(rb));
    for (Index ra = 0; ra < la; ++ra)
      for (Index rb = 0; rb < lb; ++rb)
        t.labels.push_back(a.name + "=" + a.levels[static_cast<std::size_t>(ra)] + ":" +
                           b.name + "=" + b.levels[static_cast<std::size_t>(rb)]);
    t.desc = a.name + ":" + b.name + ": deviation x deviation (" + std::to_string(la) +
             "x" + std::to_string(lb) + " cells)";
  } else if (a_cat != b_cat) {
    // Per-level slope deviations of the continuous parent.
    const Factor& cat = a_cat ? a : b;
    const Factor& cont = a_cat ? b : a;
    const Vector x = centered_values(cont);
    const Matrix dc = deviation_columns(cat);
    t.cols = dc.array().colwise() * x.array();
    t.expand = deviation_expansion(cat.level_count());
    t.carrier = indicator_columns(cat).array().colwise() * x.array();
    for (const auto& lev : cat.levels)
      t.labels.push_back(cat.name + "=" + lev + ":" + cont.name);
    t.desc = cat.name + ":" + cont.name + ": deviation x centered";
  } else {
    t.cols = centered_values(a).cwiseProduct(centered_values(b));
    t.expand = Matrix::Ones(1, 1);
    t.carrier = t.cols;
    t.labels = {a.name + ":" + b.name};
    t.desc = a.name + ":" + b.name + ": centered x centered";
  }
  return t;
}

CodedTerm code_term(const std::string& term, const std::vector<Factor>& factors,
                    const ModelSpec& spec) {
  const auto parts = split_term(term);
  if (parts.size() == 1) return code_main(find_factor(factors, term));

  // Model hierarchy: an interaction requires both parents as main effects
  // somewhere in the model.
  for (const auto& parent : parts) {
    const bool present =
        std::find(spec.interest.begin(), spec.interest.end(), parent) != spec.interest.end() ||
        std::find(spec.nuisance.begin(), spec.nuisance.end(), parent) != spec.nuisance.end();
    if (!present)
      throw ConfigError("interaction '" + term + "' needs main effect '" + parent +
                        "' in the model");
  }
  return code_interaction(find_factor(factors, parts[0]), find_factor(factors, parts[1]));
}

Index rank_of(const Matrix& m) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  return Eigen::ColPivHouseholderQR<Matrix>(m).rank();
}

} // namespace

DesignPair build_design(const ModelSpec& spec, const std::vector<Factor>& factors, Index n) {
  if (spec.interest.empty()) throw ConfigError("model has no interest term");
  for (const auto& f : factors)
    if (f.n() != n)
      throw ShapeMismatchError("factor '" + f.name + "' covers " + std::to_string(f.n()) +
                               " observations, expected " + std::to_string(n));
  for (const auto& name : spec.interest)
    if (std::find(spec.nuisance.begin(), spec.nuisance.end(), name) != spec.nuisance.end())
      throw ConfigError("term '" + name + "' appears in both interest and nuisance");

  DesignPair d;
  std::ostringstream coding;

  // Interest block(s).
  std::vector<CodedTerm> terms;
  Index px = 0, j_total = 0;
  for (const auto& name : spec.interest) {
    terms.push_back(code_term(name, factors, spec));
    px += terms.back().cols.cols();
    j_total += terms.back().expand.rows();
  }
  d.X.resize(n, px);
  d.expand = Matrix::Zero(j_total, px);
  d.carrier.resize(n, j_total);
  Index col = 0, jrow = 0;
  for (const auto& t : terms) {
    d.X.middleCols(col, t.cols.cols()) = t.cols;
    d.expand.block(jrow, col, t.expand.rows(), t.expand.cols()) = t.expand;
    d.carrier.middleCols(jrow, t.carrier.cols()) = t.carrier;
    d.j_labels.insert(d.j_labels.end(), t.labels.begin(), t.labels.end());
    coding << "X " << t.desc << "; ";
    col += t.cols.cols();
    jrow += t.expand.rows();
  }

  // Nuisance block: intercept first, then coded terms (the coding of the
  // nuisance block only matters through its column span).
  Index pz = spec.include_intercept ? 1 : 0;
  std::vector<CodedTerm> zterms;
  for (const auto& name : spec.nuisance) {
    zterms.push_back(code_term(name, factors, spec));
    pz += zterms.back().cols.cols();
  }
  d.Z.resize(n, pz);
  Index zcol = 0;
  if (spec.include_intercept) {
    d.Z.col(0).setOnes();
    zcol = 1;
    coding << "Z intercept; ";
  }
  for (const auto& t : zterms) {
    d.Z.middleCols(zcol, t.cols.cols()) = t.cols;
    coding << "Z " << t.desc << "; ";
    zcol += t.cols.cols();
  }
  d.coding_map = coding.str();

  if (!d.X.allFinite() || !d.Z.allFinite())
    throw NonFiniteInputError("design contains non-finite entries");

  // The tested effects must not be expressible by the nuisance columns:
  // adding X to Z has to raise the rank by the full interest width.
  Matrix zx(n, d.Z.cols() + d.X.cols());
  zx << d.Z, d.X;
  if (rank_of(zx) < rank_of(d.Z) + d.X.cols())
    throw ConfoundedDesignError(
        "interest columns are linearly dependent on the nuisance columns");

  return d;
}

} // namespace fglm
