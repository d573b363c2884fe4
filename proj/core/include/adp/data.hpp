#pragma once

#include "adp/features.hpp"
#include "adp/plant.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace adp {

// One recorded expert sample: state, expert action, regressor, stage costs.
struct DataSample {
  Eigen::VectorXd x_k;
  Eigen::VectorXd u_k;
  Eigen::VectorXd psi_k;
  double Q_k = 0.0;
  double R_k = 0.0;
};

struct RecordedDataset {
  std::vector<DataSample> samples;
  int l_c = 0;
  std::string plant_id;
  std::string basis_id;

  int size() const { return static_cast<int>(samples.size()); }
};

// Λ = Σ_k Ψ_kΨ_kᵀ with its extreme eigenvalues; rich ⇔ λ̲ > richness_floor.
struct RichnessCertificate {
  Eigen::MatrixXd Lambda;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool rich = false;
  double richness_floor = 0.0;
};

inline constexpr double kDefaultRichnessFloor = 1e-8;

// Regular lattice over the box [lo, hi]ⁿ, points_per_axis per axis, axis 0
// varying slowest. The ordering is stable; prefix subsets rely on it.
std::vector<Eigen::VectorXd> lattice_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                          int points_per_axis);

// Samples u_k = u*(x_k), ψ_k = ψ(x_k, u_k), Q_k, R_k at each grid point.
RecordedDataset record_expert_grid(const ControlAffinePlant& plant, const QuadraticCost& cost,
                                   const BasisSet& basis, const ReferenceSolution& ref,
                                   const std::vector<Eigen::VectorXd>& grid,
                                   std::string plant_id = "", std::string basis_id = "");

RichnessCertificate certify_richness(const RecordedDataset& ds,
                                     double richness_floor = kDefaultRichnessFloor);

// First `count` samples, preserving recording order.
RecordedDataset prefix_subset(const RecordedDataset& ds, int count);

void save_dataset(const RecordedDataset& ds, const std::string& path);
RecordedDataset load_dataset(const std::string& path);

}  // namespace adp
