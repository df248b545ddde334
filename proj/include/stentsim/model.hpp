#pragma once

#include "stentsim/beam.hpp"
#include "stentsim/contact.hpp"
#include "stentsim/hex8.hpp"
#include "stentsim/material.hpp"
#include "stentsim/meshes.hpp"

#include <Eigen/Sparse>

#include <array>
#include <string>
#include <vector>

// Scene container and global assembly. A model owns beam parts (6 dofs/node:
// translations plus multiplicative rotation increments) and solid parts
// (3 dofs/node), along with pressure loads, elastic foundations, penalty
// contact pairs, and homogeneous node constraints expressed in per-node local
// frames. Assembly produces the residual r = f_int - f_ext and the consistent
// tangent dr/du on the free dofs; the state advances by increments
// (x += du, q <- exp(dw) * q) and history variables move only on commit().

namespace stentsim {

struct SolidPart {
  SolidMesh mesh;                              // reference geometry
  std::vector<HyperelasticParams> materials;   // one per layer
  std::vector<Vec3> x;                         // current positions
  std::vector<Vec3> x_committed;
  std::vector<std::array<Mat3, 8>> strain_hist;  // committed Green strains
  int first_block = 0;                           // dof block of node 0
  int first_element_id = 0;                      // global element id of element 0
};

struct BeamPart {
  BeamMesh mesh;
  BeamSectionParams section;
  std::vector<Vec3> x;
  std::vector<Quat> q;
  std::vector<Vec3> x_committed;
  std::vector<Quat> q_committed;
  std::vector<SectionState> state;  // committed internal variables per element
  int first_block = 0;              // node i owns blocks first_block + 2i (+1)
};

struct PressureLoad {
  int part = 0;             // solid part index
  std::string surface;      // facet set loaded on its stored orientation
};

struct SpringSupport {
  int part = 0;
  std::string surface;
  double stiffness = 0.0;   // force per displacement per reference area
};

struct ContactPairStatus {
  int facet = -1;
  bool active = false;
};

struct ContactPair {
  bool beam_slave = true;      // true: beam gauss stations; false: slave facet stations
  int slave_part = 0;          // beam part (beam_slave) or solid part
  std::string slave_surface;   // only for surface-surface pairs
  int master_part = 0;         // solid part
  std::string master_surface;
  double penalty = 0.0;
  double radius = 0.0;         // slave point thickness (beam radius)
  double margin = 0.5;         // broad-phase margin
  double deep_cap = 0.3;

  // built at finalize(): one station = carrier blocks + weights + quadrature weight
  struct Station {
    std::array<int, 4> blocks{{-1, -1, -1, -1}};
    std::array<double, 4> shape{{0, 0, 0, 0}};
    double weight = 0.0;
  };
  std::vector<Station> stations;
  std::vector<ContactPairStatus> status;  // per station, refreshed on fresh assembly
};

class Model {
 public:
  int add_solid_part(SolidMesh mesh, std::vector<HyperelasticParams> per_layer);
  int add_beam_part(BeamMesh mesh, BeamSectionParams section);

  // returns the load index used to address amplitudes at assembly time
  int add_pressure(int solid_part, const std::string& surface);
  void add_springs(int solid_part, const std::string& surface, double stiffness);
  void add_beam_surface_contact(int beam_part, int master_solid, const std::string& surface,
                                double penalty, double margin = 0.5, double deep_cap = 0.3);
  void add_surface_surface_contact(int slave_solid, const std::string& slave_surface,
                                   int master_solid, const std::string& master_surface,
                                   double penalty, double margin = 0.5, double deep_cap = 0.3);

  // Homogeneous constraints in a per-node local frame (global = frame * local).
  void constrain_solid_node(int part, int node, const Mat3& frame,
                            const std::array<bool, 3>& fixed);
  void constrain_beam_node(int part, int node, const Mat3& frame,
                           const std::array<bool, 6>& fixed);

  void finalize();  // assigns dofs, builds contact stations, commits the reference

  int n_dof() const { return 3 * int(block_frame_.size()); }
  int n_free() const { return n_free_; }
  int n_pressure_loads() const { return int(pressures_.size()); }

  const SolidPart& solid(int i) const { return solids_[i]; }
  const BeamPart& beam(int i) const { return beams_[i]; }
  SolidPart& solid(int i) { return solids_[i]; }
  BeamPart& beam(int i) { return beams_[i]; }
  int n_solids() const { return int(solids_.size()); }
  int n_beams() const { return int(beams_.size()); }

  struct Assembly {
    VecX residual;                     // free dofs
    Eigen::SparseMatrix<double> tangent;
    int active_contacts = 0;
  };

  // amplitudes: current pressure per registered load [MPa]; dtau: pseudo-time
  // step for the viscous stabilization; freeze_contact reuses the active set
  // and master assignment of the last fresh assembly.
  Assembly assemble(const std::vector<double>& amplitudes, double dtau, bool freeze_contact);

  void apply_increment(const VecX& du_free);
  void commit();
  void revert();

 private:
  friend struct ModelTestAccess;
  struct Scatter;

  struct PendingConstraint {
    bool is_beam = false;
    int part = 0, node = 0;
    Mat3 frame = Mat3::Identity();
    std::array<bool, 6> fixed{};
  };
  std::vector<PendingConstraint> pending_constraints_;

  std::vector<SolidPart> solids_;
  std::vector<BeamPart> beams_;
  std::vector<PressureLoad> pressures_;
  std::vector<SpringSupport> springs_;
  std::vector<ContactPair> contacts_;

  std::vector<Mat3> block_frame_;          // per 3-dof block
  std::vector<std::array<int, 3>> free_;   // free index per block component, -1 fixed
  int n_free_ = 0;
  bool finalized_ = false;
  int n_elements_total_ = 0;
};

}  // namespace stentsim
