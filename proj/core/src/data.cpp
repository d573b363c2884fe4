#include "adp/data.hpp"

#include "adp/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace adp {

std::vector<Eigen::VectorXd> lattice_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                          int points_per_axis) {
  const int n = static_cast<int>(lo.size());
  if (hi.size() != n) throw UsageError("grid bounds dimension mismatch");
  if (points_per_axis < 1) throw UsageError("points_per_axis must be positive");
  for (int i = 0; i < n; ++i)
    if (!(lo(i) <= hi(i))) throw UsageError("grid bounds must satisfy lo <= hi");

  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(points_per_axis);

  std::vector<Eigen::VectorXd> grid;
  grid.reserve(total);
  Eigen::VectorXd point(n);
  std::vector<int> idx(n, 0);
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rest = c;
    for (int axis = n - 1; axis >= 0; --axis) {
      idx[axis] = static_cast<int>(rest % points_per_axis);
      rest /= points_per_axis;
    }
    for (int axis = 0; axis < n; ++axis) {
      point(axis) = points_per_axis == 1
                        ? lo(axis)
                        : lo(axis) + idx[axis] * (hi(axis) - lo(axis)) / (points_per_axis - 1);
    }
    grid.push_back(point);
  }
  return grid;
}

RecordedDataset record_expert_grid(const ControlAffinePlant& plant, const QuadraticCost& cost,
                                   const BasisSet& basis, const ReferenceSolution& ref,
                                   const std::vector<Eigen::VectorXd>& grid,
                                   std::string plant_id, std::string basis_id) {
  if (grid.empty()) throw UsageError("expert grid must be nonempty");
  RecordedDataset ds;
  ds.l_c = basis.l_c;
  ds.plant_id = std::move(plant_id);
  ds.basis_id = std::move(basis_id);
  ds.samples.reserve(grid.size());
  for (const auto& x : grid) {
    DataSample s;
    s.x_k = x;
    s.u_k = ref.policy(x);
    s.psi_k = psi(basis, plant, x, s.u_k);
    s.Q_k = x.dot(cost.Pi_x * x);
    s.R_k = s.u_k.dot(cost.Pi_u * s.u_k);
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

RichnessCertificate certify_richness(const RecordedDataset& ds, double richness_floor) {
  if (ds.size() < 1) throw UsageError("dataset must contain at least one sample");
  if (richness_floor < 0.0) throw UsageError("richness_floor must be nonnegative");
  const int l = ds.l_c;
  Eigen::MatrixXd Lambda = Eigen::MatrixXd::Zero(l, l);
  for (const auto& s : ds.samples) {
    if (s.psi_k.size() != l) throw UsageError("sample regressor dimension mismatch");
    const Eigen::VectorXd Psi = normalized_psi(s.psi_k);
    Lambda.noalias() += Psi * Psi.transpose();
  }
  if ((Lambda - Lambda.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw NumericalError("information matrix accumulation lost symmetry");
  Lambda = 0.5 * (Lambda + Lambda.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lambda);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed on Lambda");

  RichnessCertificate cert;
  cert.Lambda = std::move(Lambda);
  cert.lambda_min = es.eigenvalues().minCoeff();
  cert.lambda_max = es.eigenvalues().maxCoeff();
  cert.richness_floor = richness_floor;
  cert.rich = cert.lambda_min > richness_floor;
  return cert;
}

RecordedDataset prefix_subset(const RecordedDataset& ds, int count) {
  if (count < 1 || count > ds.size()) throw UsageError("subset size out of range");
  RecordedDataset out;
  out.l_c = ds.l_c;
  out.plant_id = ds.plant_id;
  out.basis_id = ds.basis_id;
  out.samples.assign(ds.samples.begin(), ds.samples.begin() + count);
  return out;
}

namespace {

nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd json_to_vec(const nlohmann::json& arr) {
  Eigen::VectorXd v(arr.size());
  Eigen::Index i = 0;
  for (const auto& e : arr) v(i++) = e.get<double>();
  return v;
}

}  // namespace

void save_dataset(const RecordedDataset& ds, const std::string& path) {
  nlohmann::json doc;
  doc["plant"] = ds.plant_id;
  doc["basis"] = ds.basis_id;
  doc["l_c"] = ds.l_c;
  doc["samples"] = nlohmann::json::array();
  for (const auto& s : ds.samples) {
    doc["samples"].push_back({{"x", vec_to_json(s.x_k)},
                              {"u", vec_to_json(s.u_k)},
                              {"psi", vec_to_json(s.psi_k)},
                              {"Q", s.Q_k},
                              {"R", s.R_k}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open dataset file for writing", path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("failed writing dataset file", path);
}

RecordedDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file", path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed dataset JSON (" + path + "): " + e.what());
  }
  try {
    RecordedDataset ds;
    ds.plant_id = doc.value("plant", "");
    ds.basis_id = doc.value("basis", "");
    ds.l_c = doc.at("l_c").get<int>();
    for (const auto& e : doc.at("samples")) {
      DataSample s;
      s.x_k = json_to_vec(e.at("x"));
      s.u_k = json_to_vec(e.at("u"));
      s.psi_k = json_to_vec(e.at("psi"));
      s.Q_k = e.at("Q").get<double>();
      s.R_k = e.at("R").get<double>();
      if (s.psi_k.size() != ds.l_c) throw ConfigError("dataset sample l_c mismatch in " + path);
      ds.samples.push_back(std::move(s));
    }
    if (ds.samples.empty()) throw ConfigError("dataset has no samples: " + path);
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid dataset structure (" + path + "): " + e.what());
  }
}

}  // namespace adp
