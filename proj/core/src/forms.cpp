#include "cutdg/forms.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include <fmt/format.h>

namespace cutdg {

void StabilizationParams::validate() const {
  if (!(cBulk > 0.0) || !(cSurf > 0.0)) throw ConfigurationError("coupling coefficients must be positive");
  for (double w : {gammaBulk, gammaSurf, muBulk, muSurf, tauBulk, tauSurf}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigurationError("penalty weights must be finite and >= 0");
  }
}

StabilizationParams StabilizationParams::ghostAblated() const {
  StabilizationParams p = *this;
  p.muSurf = 0.0;
  p.tauBulk = 0.0;
  p.tauSurf = 0.0;
  return p;
}

StabilizationParams StabilizationParams::withoutBulkGhost() const {
  StabilizationParams p = *this;
  p.muBulk = 0.0;
  p.tauBulk = 0.0;
  return p;
}

StabilizationParams StabilizationParams::withoutSurfaceGhost() const {
  StabilizationParams p = *this;
  p.muSurf = 0.0;
  p.tauSurf = 0.0;
  return p;
}

Discretization discretize(BackgroundMesh mesh, LevelSet levelset) {
  Discretization d{std::move(mesh), std::move(levelset), {}, {}, {}};
  d.dls = interpolate_levelset(d.levelset, d.mesh);
  d.topo = build_cut_topology(d.mesh, d.dls);
  d.dofs = make_dof_map(d.topo.activeBulk, d.topo.activeSurface, d.mesh.numElements());
  return d;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

/// Six-entry trace vector over the DOFs of a face's plus and minus elements.
using FaceVec = Eigen::Matrix<double, 6, 1>;

struct FacePair {
  std::array<int, 6> dofs{};
  std::array<Vec2, 3> gPlus, gMinus;
  int plus = -1, minus = -1;
};

FacePair face_pair(const BackgroundMesh& mesh, const BrokenSpace& space, int plus, int minus) {
  FacePair fp;
  fp.plus = plus;
  fp.minus = minus;
  const auto dp = space.dofs(plus), dm = space.dofs(minus);
  for (int i = 0; i < 3; ++i) {
    fp.dofs[i] = dp[i];
    fp.dofs[3 + i] = dm[i];
  }
  fp.gPlus = basis_gradients(mesh, plus);
  fp.gMinus = basis_gradients(mesh, minus);
  return fp;
}

/// [v] = v+ - v- at x.
FaceVec jump_vector(const BackgroundMesh& mesh, const FacePair& fp, const Vec2& x) {
  const auto bp = evaluate_basis(mesh, fp.plus, x);
  const auto bm = evaluate_basis(mesh, fp.minus, x);
  FaceVec j;
  for (int i = 0; i < 3; ++i) {
    j[i] = bp.values[i];
    j[3 + i] = -bm.values[i];
  }
  return j;
}

template <int N>
void scatter(Triplets& out, const std::array<int, N>& dofs, const Eigen::Matrix<double, N, N>& local) {
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      if (local(r, c) != 0.0) out.emplace_back(dofs[r], dofs[c], local(r, c));
    }
  }
}

SparseMatrix to_matrix(const Discretization& d, const Triplets& t) {
  SparseMatrix m(d.dofs.size(), d.dofs.size());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void require_segments(const Discretization& d) {
  if (d.topo.segments.size() != d.topo.activeSurface.size()) {
    throw StructuralError("surface-active element without a surface segment");
  }
}

// (grad v, grad w) and (v, w) over T ∩ Omega_h, or over the full T.
void add_bulk_volume(const Discretization& d, double gradWeight, double massWeight, bool fullElements,
                     Triplets& out) {
  for (int e : d.topo.activeBulk) {
    const QuadratureRule rule =
        fullElements ? full_element_rule(d.mesh, e, kDefaultDegree) : clip_element_rule(d.mesh, e, d.dls);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto b = evaluate_basis(d.mesh, e, rule.points[q]);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          local(i, j) += rule.weights[q] *
                         (gradWeight * b.gradients[i].dot(b.gradients[j]) + massWeight * b.values[i] * b.values[j]);
        }
      }
    }
    scatter<3>(out, d.dofs.bulk.dofs(e), local);
  }
}

// weight * ([v], [w]) over full faces.
void add_face_jumps(const Discretization& d, const std::vector<int>& faces, const BrokenSpace& space, double weight,
                    Triplets& out) {
  if (weight == 0.0) return;
  for (int f : faces) {
    const auto& face = d.mesh.interiorFaces()[f];
    const FacePair fp = face_pair(d.mesh, space, face.plus, face.minus);
    const QuadratureRule rule = full_face_rule(d.mesh, face);
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const FaceVec j = jump_vector(d.mesh, fp, rule.points[q]);
      local += (weight * rule.weights[q]) * j * j.transpose();
    }
    scatter<6>(out, fp.dofs, local);
  }
}

// weight * (n_F·[grad v], n_F·[grad w]) over full faces.
void add_normal_gradient_jumps(const Discretization& d, const std::vector<int>& faces, const BrokenSpace& space,
                               double weight, Triplets& out) {
  if (weight == 0.0) return;
  for (int f : faces) {
    const auto& face = d.mesh.interiorFaces()[f];
    const FacePair fp = face_pair(d.mesh, space, face.plus, face.minus);
    FaceVec g;
    for (int i = 0; i < 3; ++i) {
      g[i] = face.normal.dot(fp.gPlus[i]);
      g[3 + i] = -face.normal.dot(fp.gMinus[i]);
    }
    const Eigen::Matrix<double, 6, 6> local = (weight * face.length) * g * g.transpose();
    scatter<6>(out, fp.dofs, local);
  }
}

// -({n_F·grad v}, [w]) - ([v], {n_F·grad w}) over F ∩ Omega_h.
void add_bulk_consistency(const Discretization& d, Triplets& out) {
  for (int f : d.topo.bulkFaces) {
    const auto& face = d.mesh.interiorFaces()[f];
    const QuadratureRule rule = cut_face_rule(d.mesh, face, d.dls);
    if (rule.empty()) continue;
    const FacePair fp = face_pair(d.mesh, d.dofs.bulk, face.plus, face.minus);
    FaceVec avg;
    for (int i = 0; i < 3; ++i) {
      avg[i] = 0.5 * face.normal.dot(fp.gPlus[i]);
      avg[3 + i] = 0.5 * face.normal.dot(fp.gMinus[i]);
    }
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const FaceVec j = jump_vector(d.mesh, fp, rule.points[q]);
      local -= rule.weights[q] * (j * avg.transpose() + avg * j.transpose());
    }
    scatter<6>(out, fp.dofs, local);
  }
}

// (grad_Gamma v, grad_Gamma w) and (v, w) over the discrete surface.
void add_surface_volume(const Discretization& d, double gradWeight, double massWeight, Triplets& out) {
  require_segments(d);
  for (const auto& seg : d.topo.segments) {
    const int e = seg.element;
    const Mat2 proj = Mat2::Identity() - seg.normal * seg.normal.transpose();
    const QuadratureRule rule = surface_segment_rule(seg);
    const auto g = basis_gradients(d.mesh, e);
    std::array<Vec2, 3> tg;
    for (int i = 0; i < 3; ++i) tg[i] = proj * g[i];
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto b = evaluate_basis(d.mesh, e, rule.points[q]);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          local(i, j) += rule.weights[q] * (gradWeight * tg[i].dot(tg[j]) + massWeight * b.values[i] * b.values[j]);
        }
      }
    }
    scatter<3>(out, d.dofs.surface.dofs(e), local);
  }
}

struct EdgeTraces {
  std::array<int, 6> dofs{};
  FaceVec jump;
  FaceVec conormalAverage;  ///< {n_E·grad v} = (n+·grad v+ - n-·grad v-)/2
};

EdgeTraces edge_traces(const Discretization& d, const SurfaceEdge& edge) {
  const int ep = d.topo.segments[edge.plus].element;
  const int em = d.topo.segments[edge.minus].element;
  const Vec2& x = d.topo.surfacePoints[edge.point].x;
  EdgeTraces tr;
  const auto dp = d.dofs.surface.dofs(ep), dm = d.dofs.surface.dofs(em);
  const auto bp = evaluate_basis(d.mesh, ep, x);
  const auto bm = evaluate_basis(d.mesh, em, x);
  for (int i = 0; i < 3; ++i) {
    tr.dofs[i] = dp[i];
    tr.dofs[3 + i] = dm[i];
    tr.jump[i] = bp.values[i];
    tr.jump[3 + i] = -bm.values[i];
    // Co-normals are tangent to their segment, so n_E·P grad = n_E·grad.
    tr.conormalAverage[i] = 0.5 * edge.conormalPlus.dot(bp.gradients[i]);
    tr.conormalAverage[3 + i] = -0.5 * edge.conormalMinus.dot(bm.gradients[i]);
  }
  return tr;
}

void add_surface_edge_terms(const Discretization& d, double penaltyWeight, bool consistency, Triplets& out) {
  require_segments(d);
  for (const auto& edge : d.topo.surfaceEdges) {
    const EdgeTraces tr = edge_traces(d, edge);
    Eigen::Matrix<double, 6, 6> local = penaltyWeight * tr.jump * tr.jump.transpose();
    if (consistency) {
      local -= tr.jump * tr.conormalAverage.transpose() + tr.conormalAverage * tr.jump.transpose();
    }
    scatter<6>(out, tr.dofs, local);
  }
}

// (cb vb - cs vs, cb wb - cs ws) over the discrete surface.
void add_coupling(const Discretization& d, double cBulk, double cSurf, Triplets& out) {
  require_segments(d);
  for (const auto& seg : d.topo.segments) {
    const int e = seg.element;
    const auto db = d.dofs.bulk.dofs(e), ds = d.dofs.surface.dofs(e);
    const std::array<int, 6> dofs{db[0], db[1], db[2], ds[0], ds[1], ds[2]};
    const QuadratureRule rule = surface_segment_rule(seg);
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto b = evaluate_basis(d.mesh, e, rule.points[q]);
      FaceVec c;
      for (int i = 0; i < 3; ++i) {
        c[i] = cBulk * b.values[i];
        c[3 + i] = -cSurf * b.values[i];
      }
      local += rule.weights[q] * c * c.transpose();
    }
    scatter<6>(out, dofs, local);
  }
}

void add_ghost_bulk(const Discretization& d, const StabilizationParams& p, double scale, Triplets& out) {
  const double h = d.h();
  add_face_jumps(d, d.topo.ghostBulkFaces, d.dofs.bulk, scale * p.muBulk / h, out);
  add_normal_gradient_jumps(d, d.topo.ghostBulkFaces, d.dofs.bulk, scale * p.tauBulk * h, out);
}

void add_ghost_surface(const Discretization& d, const StabilizationParams& p, double scale, Triplets& out) {
  const double h = d.h();
  add_face_jumps(d, d.topo.surfaceFaces, d.dofs.surface, scale * p.muSurf / (h * h), out);
  add_normal_gradient_jumps(d, d.topo.surfaceFaces, d.dofs.surface, scale * p.tauSurf, out);
}

// Adds `scale` times each form into a shared triplet list.
void add_bulk_form(const Discretization& d, const StabilizationParams& p, double scale, Triplets& out) {
  Triplets local;
  add_bulk_volume(d, 1.0, 1.0, false, local);
  add_face_jumps(d, d.topo.bulkFaces, d.dofs.bulk, p.gammaBulk / d.h(), local);
  add_bulk_consistency(d, local);
  for (auto& t : local) out.emplace_back(t.row(), t.col(), scale * t.value());
}

void add_surface_form(const Discretization& d, const StabilizationParams& p, double scale, Triplets& out) {
  Triplets local;
  add_surface_volume(d, 1.0, 1.0, local);
  add_surface_edge_terms(d, p.gammaSurf / d.h(), true, local);
  for (auto& t : local) out.emplace_back(t.row(), t.col(), scale * t.value());
}

}  // namespace

SparseMatrix assemble_bulk_form(const Discretization& d, const StabilizationParams& p) {
  Triplets t;
  add_bulk_form(d, p, 1.0, t);
  return to_matrix(d, t);
}

SparseMatrix assemble_surface_form(const Discretization& d, const StabilizationParams& p) {
  Triplets t;
  add_surface_form(d, p, 1.0, t);
  return to_matrix(d, t);
}

SparseMatrix assemble_coupling_form(const Discretization& d, const StabilizationParams& p) {
  Triplets t;
  add_coupling(d, p.cBulk, p.cSurf, t);
  return to_matrix(d, t);
}

SparseMatrix assemble_ghost_bulk(const Discretization& d, const StabilizationParams& p) {
  Triplets t;
  add_ghost_bulk(d, p, 1.0, t);
  return to_matrix(d, t);
}

SparseMatrix assemble_ghost_surface(const Discretization& d, const StabilizationParams& p) {
  Triplets t;
  add_ghost_surface(d, p, 1.0, t);
  return to_matrix(d, t);
}

SparseMatrix assemble_matrix(const Discretization& d, const StabilizationParams& p) {
  p.validate();
  Triplets t;
  add_bulk_form(d, p, p.cBulk, t);
  add_ghost_bulk(d, p, p.cBulk, t);
  add_surface_form(d, p, p.cSurf, t);
  add_ghost_surface(d, p, p.cSurf, t);
  add_coupling(d, p.cBulk, p.cSurf, t);
  return to_matrix(d, t);
}

Eigen::VectorXd assemble_rhs(const Discretization& d, const LoadData& load, const StabilizationParams& p) {
  require_segments(d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d.dofs.size());
  for (int e : d.topo.activeBulk) {
    const QuadratureRule rule = clip_element_rule(d.mesh, e, d.dls, load.degree);
    const auto dofs = d.dofs.bulk.dofs(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto basis = evaluate_basis(d.mesh, e, rule.points[q]);
      const double f = load.fBulk(rule.points[q]);
      for (int i = 0; i < 3; ++i) b[dofs[i]] += p.cBulk * rule.weights[q] * f * basis.values[i];
    }
  }
  for (const auto& seg : d.topo.segments) {
    const int e = seg.element;
    const QuadratureRule rule = surface_segment_rule(seg, load.degree);
    const auto ds = d.dofs.surface.dofs(e), db = d.dofs.bulk.dofs(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      if (!(std::abs(d.levelset.rho(x)) < d.levelset.validityRadius)) {
        throw DomainError(fmt::format("surface data extended outside the closest-point neighborhood at ({}, {})",
                                      x.x(), x.y()));
      }
      const auto basis = evaluate_basis(d.mesh, e, x);
      const double f = load.fSurf(x);
      for (int i = 0; i < 3; ++i) b[ds[i]] += p.cSurf * rule.weights[q] * f * basis.values[i];
      if (load.bulkFluxMismatch) {
        const double g = load.bulkFluxMismatch(x, seg.normal);
        for (int i = 0; i < 3; ++i) b[db[i]] += p.cBulk * rule.weights[q] * g * basis.values[i];
      }
    }
  }
  if (load.surfaceGradient) {
    for (const auto& edge : d.topo.surfaceEdges) {
      const Vec2& x = d.topo.surfacePoints[edge.point].x;
      const Vec2 grad = load.surfaceGradient(x);
      const double source = (edge.conormalPlus + edge.conormalMinus).dot(grad);
      for (int s : {edge.plus, edge.minus}) {
        const int e = d.topo.segments[s].element;
        const auto basis = evaluate_basis(d.mesh, e, x);
        const auto ds = d.dofs.surface.dofs(e);
        for (int i = 0; i < 3; ++i) b[ds[i]] += p.cSurf * 0.5 * source * basis.values[i];
      }
    }
  }
  return b;
}

AssembledSystem assemble_system(const Discretization& d, const LoadData& load, const StabilizationParams& p) {
  AssembledSystem sys;
  sys.matrix = assemble_matrix(d, p);
  sys.rhs = assemble_rhs(d, load, p);
  sys.dofs = d.dofs;
  sys.params = p;
  sys.h = d.h();
  return sys;
}

SparseMatrix energy_gram(const Discretization& d, const StabilizationParams& p, NormVariant variant) {
  const double h = d.h();
  Triplets t;
  const bool bulk = variant != NormVariant::Surface;
  const bool surf = variant != NormVariant::Bulk;
  const double cb = variant == NormVariant::Total ? p.cBulk : 1.0;
  const double cs = variant == NormVariant::Total ? p.cSurf : 1.0;
  if (bulk) {
    Triplets local;
    add_bulk_volume(d, 1.0, 1.0, false, local);
    add_face_jumps(d, d.topo.bulkFaces, d.dofs.bulk, 1.0 / h, local);
    add_ghost_bulk(d, p, 1.0, local);
    for (auto& x : local) t.emplace_back(x.row(), x.col(), cb * x.value());
  }
  if (surf) {
    Triplets local;
    add_surface_volume(d, 1.0, 1.0, local);
    add_surface_edge_terms(d, 1.0 / h, false, local);
    add_ghost_surface(d, p, 1.0, local);
    for (auto& x : local) t.emplace_back(x.row(), x.col(), cs * x.value());
  }
  if (variant == NormVariant::Total) add_coupling(d, p.cBulk, p.cSurf, t);
  return to_matrix(d, t);
}

SparseMatrix bulk_gradient_gram(const Discretization& d, bool fullElements) {
  Triplets t;
  add_bulk_volume(d, 1.0, 0.0, fullElements, t);
  return to_matrix(d, t);
}

SparseMatrix surface_gradient_gram(const Discretization& d) {
  Triplets t;
  add_surface_volume(d, 1.0, 0.0, t);
  return to_matrix(d, t);
}

SparseMatrix surface_band_mass(const Discretization& d) {
  Triplets t;
  for (int e : d.topo.activeSurface) {
    const QuadratureRule rule = full_element_rule(d.mesh, e);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto b = evaluate_basis(d.mesh, e, rule.points[q]);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local(i, j) += rule.weights[q] * b.values[i] * b.values[j];
      }
    }
    scatter<3>(t, d.dofs.surface.dofs(e), local);
  }
  return to_matrix(d, t);
}

Eigen::VectorXd surface_mean_functional(const Discretization& d) {
  require_segments(d);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(d.dofs.size());
  const double length = d.topo.surfaceLength();
  for (const auto& seg : d.topo.segments) {
    const QuadratureRule rule = surface_segment_rule(seg);
    const auto ds = d.dofs.surface.dofs(seg.element);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto b = evaluate_basis(d.mesh, seg.element, rule.points[q]);
      for (int i = 0; i < 3; ++i) m[ds[i]] += rule.weights[q] * b.values[i] / length;
    }
  }
  return m;
}

double symmetry_defect(const SparseMatrix& a) {
  const SparseMatrix diff = SparseMatrix(a.transpose()) - a;
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

void write_coordinate(std::ostream& out, const SparseMatrix& a) {
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      out << fmt::format("{} {} {:.17g}\n", it.row(), it.col(), it.value());
    }
  }
}

void write_coordinate(std::ostream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << fmt::format("{} {:.17g}\n", i, v[i]);
}

}  // namespace cutdg
