#include "stentsim/model.hpp"

#include "stentsim/so3.hpp"

#include <memory>
#include <stdexcept>

namespace stentsim {

namespace {

// 4-point Gauss-Legendre rule on [-1, 1] (beam contact stations)
constexpr double kG4x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                            0.8611363115940526};
constexpr double kG4w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                            0.3478548451374538};
constexpr double kGauss2 = 0.5773502691896257;  // 2x2 rule abscissa, weight 1

void facet_shape(double xi, double eta, double n[4], double dxi[4], double deta[4]) {
  static const double sx[4] = {-1, 1, 1, -1};
  static const double se[4] = {-1, -1, 1, 1};
  for (int a = 0; a < 4; ++a) {
    n[a] = 0.25 * (1 + sx[a] * xi) * (1 + se[a] * eta);
    dxi[a] = 0.25 * sx[a] * (1 + se[a] * eta);
    deta[a] = 0.25 * se[a] * (1 + sx[a] * xi);
  }
}

double facet_reference_area(const std::array<Vec3, 4>& X, double xi, double eta) {
  double n[4], dxi[4], deta[4];
  facet_shape(xi, eta, n, dxi, deta);
  Vec3 txi = Vec3::Zero(), teta = Vec3::Zero();
  for (int a = 0; a < 4; ++a) {
    txi += dxi[a] * X[a];
    teta += deta[a] * X[a];
  }
  return txi.cross(teta).norm();
}

}  // namespace

int Model::add_solid_part(SolidMesh mesh, std::vector<HyperelasticParams> per_layer) {
  if (finalized_) throw std::logic_error("model: cannot add parts after finalize");
  if (mesh.x.empty() || mesh.hex.empty())
    throw std::invalid_argument("model: solid part must have nodes and elements");
  if (int(per_layer.size()) != mesh.n_layers)
    throw std::invalid_argument("model: one material per layer required");
  if (mesh.fiber_a.size() != mesh.hex.size() || mesh.fiber_b.size() != mesh.hex.size())
    throw std::invalid_argument("model: fibers must be assigned before adding the part");
  SolidPart sp;
  sp.mesh = std::move(mesh);
  sp.materials = std::move(per_layer);
  sp.x = sp.mesh.x;
  sp.x_committed = sp.x;
  sp.strain_hist.assign(sp.mesh.hex.size(), [] {
    std::array<Mat3, 8> z;
    z.fill(Mat3::Zero());
    return z;
  }());
  solids_.push_back(std::move(sp));
  return int(solids_.size()) - 1;
}

int Model::add_beam_part(BeamMesh mesh, BeamSectionParams section) {
  if (finalized_) throw std::logic_error("model: cannot add parts after finalize");
  if (mesh.x.empty() || mesh.elements.empty())
    throw std::invalid_argument("model: beam part must have nodes and elements");
  BeamPart bp;
  bp.mesh = std::move(mesh);
  bp.section = section;
  bp.x = bp.mesh.x;
  bp.q = bp.mesh.q;
  bp.x_committed = bp.x;
  bp.q_committed = bp.q;
  bp.state.assign(bp.mesh.elements.size(), SectionState{});
  beams_.push_back(std::move(bp));
  return int(beams_.size()) - 1;
}

int Model::add_pressure(int solid_part, const std::string& surface) {
  if (!solids_[solid_part].mesh.surfaces.count(surface))
    throw std::invalid_argument("model: unknown surface '" + surface + "'");
  pressures_.push_back({solid_part, surface});
  return int(pressures_.size()) - 1;
}

void Model::add_springs(int solid_part, const std::string& surface, double stiffness) {
  if (!solids_[solid_part].mesh.surfaces.count(surface))
    throw std::invalid_argument("model: unknown surface '" + surface + "'");
  if (!(stiffness > 0.0)) throw std::invalid_argument("model: spring stiffness must be > 0");
  springs_.push_back({solid_part, surface, stiffness});
}

void Model::add_beam_surface_contact(int beam_part, int master_solid,
                                     const std::string& surface, double penalty,
                                     double margin, double deep_cap) {
  if (!solids_[master_solid].mesh.surfaces.count(surface))
    throw std::invalid_argument("model: unknown surface '" + surface + "'");
  ContactPair c;
  c.beam_slave = true;
  c.slave_part = beam_part;
  c.master_part = master_solid;
  c.master_surface = surface;
  c.penalty = penalty;
  c.radius = beams_[beam_part].section.radius;
  c.margin = margin;
  c.deep_cap = deep_cap;
  contacts_.push_back(std::move(c));
}

void Model::add_surface_surface_contact(int slave_solid, const std::string& slave_surface,
                                        int master_solid, const std::string& master_surface,
                                        double penalty, double margin, double deep_cap) {
  if (!solids_[slave_solid].mesh.surfaces.count(slave_surface) ||
      !solids_[master_solid].mesh.surfaces.count(master_surface))
    throw std::invalid_argument("model: unknown contact surface");
  ContactPair c;
  c.beam_slave = false;
  c.slave_part = slave_solid;
  c.slave_surface = slave_surface;
  c.master_part = master_solid;
  c.master_surface = master_surface;
  c.penalty = penalty;
  c.radius = 0.0;
  c.margin = margin;
  c.deep_cap = deep_cap;
  contacts_.push_back(std::move(c));
}

void Model::constrain_solid_node(int part, int node, const Mat3& frame,
                                 const std::array<bool, 3>& fixed) {
  PendingConstraint pc;
  pc.is_beam = false;
  pc.part = part;
  pc.node = node;
  pc.frame = frame;
  pc.fixed = {fixed[0], fixed[1], fixed[2], false, false, false};
  pending_constraints_.push_back(pc);
}

void Model::constrain_beam_node(int part, int node, const Mat3& frame,
                                const std::array<bool, 6>& fixed) {
  PendingConstraint pc;
  pc.is_beam = true;
  pc.part = part;
  pc.node = node;
  pc.frame = frame;
  pc.fixed = fixed;
  pending_constraints_.push_back(pc);
}

void Model::finalize() {
  if (finalized_) throw std::logic_error("model: finalize called twice");

  int blocks = 0, elem_id = 0;
  for (SolidPart& sp : solids_) {
    sp.first_block = blocks;
    blocks += int(sp.mesh.x.size());
    sp.first_element_id = elem_id;
    elem_id += int(sp.mesh.hex.size());
  }
  for (BeamPart& bp : beams_) {
    bp.first_block = blocks;
    blocks += 2 * int(bp.mesh.x.size());
  }
  n_elements_total_ = elem_id;
  block_frame_.assign(blocks, Mat3::Identity());

  std::vector<std::array<bool, 3>> fixed(blocks, {false, false, false});
  for (const PendingConstraint& pc : pending_constraints_) {
    if ((pc.frame.transpose() * pc.frame - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-10 ||
        pc.frame.determinant() < 0.0)
      throw std::invalid_argument("model: constraint frame must be a rotation");
    if (pc.is_beam) {
      const int tb = beams_[pc.part].first_block + 2 * pc.node;
      block_frame_[tb] = pc.frame;
      block_frame_[tb + 1] = pc.frame;
      for (int c = 0; c < 3; ++c) {
        fixed[tb][c] = fixed[tb][c] || pc.fixed[c];
        fixed[tb + 1][c] = fixed[tb + 1][c] || pc.fixed[3 + c];
      }
    } else {
      const int b = solids_[pc.part].first_block + pc.node;
      block_frame_[b] = pc.frame;
      for (int c = 0; c < 3; ++c) fixed[b][c] = fixed[b][c] || pc.fixed[c];
    }
  }

  free_.assign(blocks, {-1, -1, -1});
  n_free_ = 0;
  for (int b = 0; b < blocks; ++b)
    for (int c = 0; c < 3; ++c)
      if (!fixed[b][c]) free_[b][c] = n_free_++;

  // contact stations
  for (ContactPair& cp : contacts_) {
    cp.stations.clear();
    if (cp.beam_slave) {
      const BeamPart& bp = beams_[cp.slave_part];
      for (const BeamElement& e : bp.mesh.elements) {
        for (int g = 0; g < 4; ++g) {
          ContactPair::Station st;
          const double n1 = 0.5 * (1.0 - kG4x[g]), n2 = 0.5 * (1.0 + kG4x[g]);
          st.blocks = {bp.first_block + 2 * e.n[0], bp.first_block + 2 * e.n[1], -1, -1};
          st.shape = {n1, n2, 0.0, 0.0};
          st.weight = 0.5 * e.l_ref * kG4w[g];
          cp.stations.push_back(st);
        }
      }
    } else {
      const SolidPart& sp = solids_[cp.slave_part];
      for (const Facet& f : sp.mesh.surfaces.at(cp.slave_surface)) {
        const std::array<Vec3, 4> X = {sp.mesh.x[f.n[0]], sp.mesh.x[f.n[1]],
                                       sp.mesh.x[f.n[2]], sp.mesh.x[f.n[3]]};
        for (int gi = 0; gi < 2; ++gi)
          for (int gj = 0; gj < 2; ++gj) {
            const double xi = (gi == 0 ? -kGauss2 : kGauss2);
            const double eta = (gj == 0 ? -kGauss2 : kGauss2);
            ContactPair::Station st;
            double n[4], dxi[4], deta[4];
            facet_shape(xi, eta, n, dxi, deta);
            st.blocks = {sp.first_block + f.n[0], sp.first_block + f.n[1],
                         sp.first_block + f.n[2], sp.first_block + f.n[3]};
            st.shape = {n[0], n[1], n[2], n[3]};
            st.weight = facet_reference_area(X, xi, eta);
            cp.stations.push_back(st);
          }
      }
    }
    cp.status.assign(cp.stations.size(), ContactPairStatus{});
  }

  finalized_ = true;
  commit();
}

Model::Assembly Model::assemble(const std::vector<double>& amplitudes, double dtau,
                                bool freeze_contact) {
  if (!finalized_) throw std::logic_error("model: assemble before finalize");
  if (amplitudes.size() != pressures_.size())
    throw std::invalid_argument("model: one amplitude per pressure load required");

  Assembly out;
  out.residual = VecX::Zero(n_free_);
  std::vector<Eigen::Triplet<double>> trip;
  std::size_t estimate = 0;
  for (const SolidPart& sp : solids_) estimate += sp.mesh.hex.size() * 576;
  for (const BeamPart& bp : beams_) estimate += bp.mesh.elements.size() * 144;
  trip.reserve(estimate + (1 << 16));

  const auto scat_f = [&](int block, const Vec3& f) {
    const Vec3 fl = block_frame_[block].transpose() * f;
    for (int c = 0; c < 3; ++c)
      if (free_[block][c] >= 0) out.residual[free_[block][c]] += fl[c];
  };
  const auto scat_k = [&](int bi, int bj, const Mat3& k) {
    const Mat3 kl = block_frame_[bi].transpose() * k * block_frame_[bj];
    for (int ci = 0; ci < 3; ++ci) {
      if (free_[bi][ci] < 0) continue;
      for (int cj = 0; cj < 3; ++cj)
        if (free_[bj][cj] >= 0)
          trip.emplace_back(free_[bi][ci], free_[bj][cj], kl(ci, cj));
    }
  };

  // current position per translation block (rotation blocks mirror the node)
  std::vector<Vec3> block_pos(block_frame_.size(), Vec3::Zero());
  for (const SolidPart& sp : solids_)
    for (std::size_t i = 0; i < sp.x.size(); ++i) block_pos[sp.first_block + int(i)] = sp.x[i];
  for (const BeamPart& bp : beams_)
    for (std::size_t i = 0; i < bp.x.size(); ++i) {
      block_pos[bp.first_block + 2 * int(i)] = bp.x[i];
      block_pos[bp.first_block + 2 * int(i) + 1] = bp.x[i];
    }

  // solid internal forces
  for (const SolidPart& sp : solids_) {
    for (std::size_t e = 0; e < sp.mesh.hex.size(); ++e) {
      std::array<Vec3, 8> X;
      Vec24 u;
      for (int a = 0; a < 8; ++a) {
        const int n = sp.mesh.hex[e][a];
        X[a] = sp.mesh.x[n];
        u.segment<3>(3 * a) = sp.x[n] - sp.mesh.x[n];
      }
      const HyperelasticParams& mat = sp.materials[sp.mesh.layer[e]];
      const Hex8Result res =
          hex8_internal(X, u, mat, sp.mesh.fiber_a[e], sp.mesh.fiber_b[e], &sp.strain_hist[e],
                        dtau, sp.first_element_id + int(e));
      for (int a = 0; a < 8; ++a) {
        const int ba = sp.first_block + sp.mesh.hex[e][a];
        scat_f(ba, res.f.segment<3>(3 * a));
        for (int b = 0; b < 8; ++b)
          scat_k(ba, sp.first_block + sp.mesh.hex[e][b], res.k.block<3, 3>(3 * a, 3 * b));
      }
    }
  }

  // beam internal forces
  for (const BeamPart& bp : beams_) {
    for (std::size_t e = 0; e < bp.mesh.elements.size(); ++e) {
      const BeamElement& el = bp.mesh.elements[e];
      const BeamResult res = beam_internal(el, bp.x[el.n[0]], bp.q[el.n[0]], bp.x[el.n[1]],
                                           bp.q[el.n[1]], bp.section, bp.state[e]);
      const int blocks[4] = {bp.first_block + 2 * el.n[0], bp.first_block + 2 * el.n[0] + 1,
                             bp.first_block + 2 * el.n[1], bp.first_block + 2 * el.n[1] + 1};
      for (int i = 0; i < 4; ++i) {
        scat_f(blocks[i], res.f.segment<3>(3 * i));
        for (int j = 0; j < 4; ++j)
          scat_k(blocks[i], blocks[j], res.k.block<3, 3>(3 * i, 3 * j));
      }
    }
  }

  // follower pressures: external load, r -= f, K -= df/du
  for (std::size_t li = 0; li < pressures_.size(); ++li) {
    const double p = amplitudes[li];
    if (p == 0.0) continue;
    const SolidPart& sp = solids_[pressures_[li].part];
    for (const Facet& f : sp.mesh.surfaces.at(pressures_[li].surface)) {
      std::array<Vec3, 4> X;
      Vec12 u;
      for (int a = 0; a < 4; ++a) {
        X[a] = sp.mesh.x[f.n[a]];
        u.segment<3>(3 * a) = sp.x[f.n[a]] - sp.mesh.x[f.n[a]];
      }
      const FacetResult res = follower_pressure(X, u, p);
      for (int a = 0; a < 4; ++a) {
        const int ba = sp.first_block + f.n[a];
        scat_f(ba, -res.f.segment<3>(3 * a));
        for (int b = 0; b < 4; ++b)
          scat_k(ba, sp.first_block + f.n[b], -res.k.block<3, 3>(3 * a, 3 * b));
      }
    }
  }

  // elastic foundations: r -= f = +c M u, K += c M
  for (const SpringSupport& sg : springs_) {
    const SolidPart& sp = solids_[sg.part];
    for (const Facet& f : sp.mesh.surfaces.at(sg.surface)) {
      std::array<Vec3, 4> X;
      Vec12 u;
      for (int a = 0; a < 4; ++a) {
        X[a] = sp.mesh.x[f.n[a]];
        u.segment<3>(3 * a) = sp.x[f.n[a]] - sp.mesh.x[f.n[a]];
      }
      const FacetResult res = spring_boundary(X, u, sg.stiffness);
      for (int a = 0; a < 4; ++a) {
        const int ba = sp.first_block + f.n[a];
        scat_f(ba, -res.f.segment<3>(3 * a));
        for (int b = 0; b < 4; ++b)
          scat_k(ba, sp.first_block + f.n[b], res.k.block<3, 3>(3 * a, 3 * b));
      }
    }
  }

  // penalty contact
  for (ContactPair& cp : contacts_) {
    const SolidPart& mp = solids_[cp.master_part];
    const std::vector<Facet>& mfl = mp.mesh.surfaces.at(cp.master_surface);
    std::vector<std::array<Vec3, 4>> mfacets(mfl.size());
    for (std::size_t i = 0; i < mfl.size(); ++i)
      for (int a = 0; a < 4; ++a) mfacets[i][a] = mp.x[mfl[i].n[a]];

    std::unique_ptr<FacetGrid> grid;
    if (!freeze_contact) grid = std::make_unique<FacetGrid>(mfacets, cp.margin);

    std::vector<int> cand;
    for (std::size_t si = 0; si < cp.stations.size(); ++si) {
      const ContactPair::Station& st = cp.stations[si];
      Vec3 p = Vec3::Zero();
      for (int j = 0; j < 4; ++j)
        if (st.blocks[j] >= 0) p += st.shape[j] * block_pos[st.blocks[j]];

      ContactPointResult res;
      if (!freeze_contact) {
        grid->query(p, cand);
        const BestFacet best = pick_best_facet(p, mfacets, cand, cp.radius, cp.deep_cap);
        cp.status[si] = {best.facet, best.facet >= 0 && best.gap < 0.0};
        if (!cp.status[si].active) continue;
        res = point_facet_penalty(p, mfacets[best.facet], cp.radius, cp.penalty, st.weight,
                                  cp.deep_cap, &best.proj);
      } else {
        if (!cp.status[si].active || cp.status[si].facet < 0) continue;
        res = point_facet_penalty(p, mfacets[cp.status[si].facet], cp.radius, cp.penalty,
                                  st.weight, cp.deep_cap, nullptr, true);
      }
      if (!res.active) continue;
      ++out.active_contacts;

      const Facet& mf = mfl[cp.status[si].facet];
      int rows[8];
      double w[8];
      int nrows = 0;
      for (int j = 0; j < 4; ++j)
        if (st.blocks[j] >= 0) {
          rows[nrows] = st.blocks[j];
          w[nrows++] = st.shape[j];
        }
      const int mrow0 = nrows;
      for (int a = 0; a < 4; ++a) {
        rows[nrows] = mp.first_block + mf.n[a];
        w[nrows++] = 1.0;
      }
      // expand the 15-dof kernel result: slave rows are the point rows scaled
      // by the carrier weights; master rows map one-to-one
      const auto kern_f = [&](int i) -> Vec3 {
        return i < mrow0 ? Vec3(w[i] * res.f.segment<3>(0))
                         : Vec3(res.f.segment<3>(3 + 3 * (i - mrow0)));
      };
      const auto kern_k = [&](int i, int j) -> Mat3 {
        const int oi = i < mrow0 ? 0 : 3 + 3 * (i - mrow0);
        const int oj = j < mrow0 ? 0 : 3 + 3 * (j - mrow0);
        const double s = (i < mrow0 ? w[i] : 1.0) * (j < mrow0 ? w[j] : 1.0);
        return s * res.k.block<3, 3>(oi, oj);
      };
      for (int i = 0; i < nrows; ++i) {
        scat_f(rows[i], kern_f(i));
        for (int j = 0; j < nrows; ++j) scat_k(rows[i], rows[j], kern_k(i, j));
      }
    }
  }

  out.tangent.resize(n_free_, n_free_);
  out.tangent.setFromTriplets(trip.begin(), trip.end());
  return out;
}

void Model::apply_increment(const VecX& du_free) {
  if (du_free.size() != n_free_) throw std::invalid_argument("model: increment size mismatch");
  const auto local_delta = [&](int block) {
    Vec3 dl = Vec3::Zero();
    for (int c = 0; c < 3; ++c)
      if (free_[block][c] >= 0) dl[c] = du_free[free_[block][c]];
    return Vec3(block_frame_[block] * dl);
  };
  for (SolidPart& sp : solids_)
    for (std::size_t i = 0; i < sp.x.size(); ++i)
      sp.x[i] += local_delta(sp.first_block + int(i));
  for (BeamPart& bp : beams_)
    for (std::size_t i = 0; i < bp.x.size(); ++i) {
      bp.x[i] += local_delta(bp.first_block + 2 * int(i));
      const Vec3 dw = local_delta(bp.first_block + 2 * int(i) + 1);
      if (dw.squaredNorm() > 0.0) bp.q[i] = (so3::exp_quat(dw) * bp.q[i]).normalized();
    }
}

void Model::commit() {
  for (SolidPart& sp : solids_) {
    for (std::size_t e = 0; e < sp.mesh.hex.size(); ++e) {
      std::array<Vec3, 8> X;
      Vec24 u;
      for (int a = 0; a < 8; ++a) {
        const int n = sp.mesh.hex[e][a];
        X[a] = sp.mesh.x[n];
        u.segment<3>(3 * a) = sp.x[n] - sp.mesh.x[n];
      }
      sp.strain_hist[e] = hex8_green_strains(X, u, sp.first_element_id + int(e));
    }
    sp.x_committed = sp.x;
  }
  for (BeamPart& bp : beams_) {
    for (std::size_t e = 0; e < bp.mesh.elements.size(); ++e) {
      const BeamElement& el = bp.mesh.elements[e];
      const BeamStrains s =
          beam_strains(el, bp.x[el.n[0]], bp.q[el.n[0]], bp.x[el.n[1]], bp.q[el.n[1]]);
      SectionState next;
      moment_update(s.kappa, bp.state[e], bp.section, &next);
      bp.state[e] = next;
    }
    bp.x_committed = bp.x;
    bp.q_committed = bp.q;
  }
}

void Model::revert() {
  for (SolidPart& sp : solids_) sp.x = sp.x_committed;
  for (BeamPart& bp : beams_) {
    bp.x = bp.x_committed;
    bp.q = bp.q_committed;
  }
}

}  // namespace stentsim
