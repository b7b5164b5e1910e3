#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rdent/audit.hpp"
#include "rdent/fvrecover.hpp"

namespace rdent {

/// Legacy VTK POLYDATA; points are the DoF locations, P2 elements are split
/// into four sub-triangles. Discontinuous fields keep per-element points.
void write_field_vtk(std::ostream& out, const DofMap& dofmap, std::span<const double> u, const std::string& name = "u");

void write_history_csv(std::ostream& out, std::span<const HistoryRow> rows);

/// One row per element: defect, alpha, filter production.
void write_entropy_dump(std::ostream& out, const EntropyCorrectionReport& report);

/// h, n_dofs, L1, slope, L2, slope, Linf, slope; slope cells empty on the first row.
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

/// Zero-sum element residuals Ψ_σ = Φ_σ − (1/#K) Σ_σ' Φ_σ' over the element's own DoFs.
std::vector<std::vector<double>> element_residual_table(const Discretization& d, std::span<const double> u);
/// `element,psi_0,...,psi_{n-1}`
void write_element_residuals(std::ostream& out, const std::vector<std::vector<double>>& psi);
/// Inverse of write_element_residuals; throws std::invalid_argument with the line number on bad input.
std::vector<std::vector<double>> read_element_residuals(std::istream& in);
/// `element,from,to,flux,node_defect`
void write_flux_graph(std::ostream& out, int element, const FluxGraph& g, std::span<const double> psi, bool header);

}  // namespace rdent
