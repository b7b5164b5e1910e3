#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "rdent/basis.hpp"
#include "rdent/mesh.hpp"
#include "rdent/problems.hpp"

namespace rdent {

enum class BaseScheme { galerkin, supg, galerkin_jump, dg, rusanov, limited_rd };
enum class EntropyFilter { none, jump, streamline };
enum class BoundaryFluxKind { llf, upwind };

struct SchemeConfig {
    BaseScheme base = BaseScheme::galerkin;
    BasisKind basis = BasisKind::lagrange;
    double theta_jump = 0.0;    ///< θ_J: jump term of galerkin_jump and limited_rd
    double theta_stream = 0.0;  ///< θ_S: streamline term of limited_rd
    double supg_theta = 1.0;    ///< multiplier of the SUPG stabilization
    bool entropy_correction = false;
    EntropyFilter entropy_filter = EntropyFilter::none;
    double filter_theta = 0.0;
    double epsilon = 1e-20;
    EntropyFluxKind entropy_flux = EntropyFluxKind::potential;
    BoundaryFluxKind boundary_flux = BoundaryFluxKind::llf;
    /// Use the 3-point edge-midpoint rule for the entropy filter terms.
    bool reduced_filter_quadrature = false;

    /// Throws std::invalid_argument on negative θ or non-positive ε.
    void validate() const;
};

std::string to_string(BaseScheme b);
BaseScheme parse_base_scheme(const std::string& s);

/// Largest stencil of an element residual: own DoFs plus the DoFs of the
/// three face neighbours (jump terms reach across faces).
constexpr int kMaxStencil = kMaxLocalDofs * 4;

/// Per-DoF residuals of one element (or boundary face). The first `n_own`
/// entries are the element's own DoFs in local order; further entries are
/// neighbour DoFs touched by face-jump terms.
struct ElementResidual {
    int n = 0;
    int n_own = 0;
    std::array<int, kMaxStencil> dofs{};
    std::array<double, kMaxStencil> phi{};
    /// ∮_{∂K} f̂ dγ for elements; ∮_Γ f̂(u, u_b) dγ for boundary faces.
    double flux_integral = 0.0;

    double sum() const;
    int find_or_add(int dof);
    /// Adds other's entries by DoF id.
    void merge(const ElementResidual& other);
};

/// β_σ from low-order residuals with Σ phi_low = total. `scale` sets the
/// degeneracy floor |total| <= 1e-14 * scale, where β = 1/n.
std::array<double, kMaxLocalDofs> limiter_beta(std::span<const double> phi_low, double total, double scale);

/// Evaluates element and boundary residuals of one scheme on one mesh.
/// Holds references: mesh, dofmap and problem must outlive it.
class Discretization {
public:
    Discretization(const Mesh& mesh, const DofMap& dofmap, const ProblemSpec& problem, SchemeConfig scheme);

    const Mesh& mesh() const { return *mesh_; }
    const DofMap& dofmap() const { return *dofmap_; }
    const ProblemSpec& problem() const { return *problem_; }
    const SchemeConfig& scheme() const { return scheme_; }
    int degree() const { return dofmap_->degree(); }
    bool discontinuous() const { return dofmap_->continuity() == Continuity::discontinuous; }

    const BasisTable& volume_table() const { return volume_; }
    const BasisTable& filter_table() const { return scheme_.reduced_filter_quadrature ? reduced_ : volume_; }
    const BasisTable& face_table(int f) const { return faces_[f]; }

    ElementResidual galerkin_residual(int e, std::span<const double> u) const;
    ElementResidual supg_residual(int e, std::span<const double> u) const;
    ElementResidual jump_stabilized_residual(int e, std::span<const double> u) const;
    ElementResidual rusanov_residual(int e, std::span<const double> u) const;
    ElementResidual limited_rd_residual(int e, std::span<const double> u) const;
    /// Dispatches on scheme().base.
    ElementResidual base_residual(int e, std::span<const double> u) const;
    /// Φ^Γ for boundary face index bf.
    ElementResidual boundary_residual(int bf, std::span<const double> u) const;

    /// Rusanov coefficient α = #K max_{σ,σ'} |∮_K φ_σ a·∇φ_σ' dx|.
    double rusanov_alpha(int e, std::span<const double> u) const;

    /// θ h² ∮_e [∇φ_σ]·[∇w] over every interior face e of K, added into r.
    /// w is u itself or the entropy variable V(u); h is h_K or |e|.
    void add_jump_terms(ElementResidual& r, int e, std::span<const double> u, double theta, bool face_length_h,
                        bool entropy_variable) const;
    /// coeff ∮_K (a·∇φ_σ) τ_K (a·∇w) dx with a = ∂f/∂w, added into r.
    void add_streamline_terms(ElementResidual& r, int e, std::span<const double> u, double coeff,
                              bool entropy_variable, const BasisTable& table) const;

    /// Local DoF values of element e.
    std::array<double, kMaxLocalDofs> gather(int e, std::span<const double> u) const;
    /// u^h at local face point q of face f of element e.
    double face_trace(int e, int f, int q, std::span<const double> u) const;
    /// Boundary data at point q of boundary face bf (cached).
    double boundary_value(int bf, int q) const { return ub_[static_cast<std::size_t>(bf) * n_face_points_ + q]; }
    int n_face_points() const { return n_face_points_; }

    /// Grid function of point values for Lagrange, Bézier coefficients otherwise.
    std::vector<double> interpolate(const std::function<double(const Vec2&)>& fn) const;
    /// u^h at barycentric point b of element e.
    double evaluate(int e, const Bary& b, std::span<const double> u) const;

private:
    void add_galerkin(ElementResidual& r, int e, const std::array<double, kMaxLocalDofs>& loc,
                      std::span<const double> u) const;
    ElementResidual start(int e) const;

    const Mesh* mesh_;
    const DofMap* dofmap_;
    const ProblemSpec* problem_;
    SchemeConfig scheme_;
    BasisTable volume_;
    BasisTable reduced_;
    std::array<BasisTable, 3> faces_;
    int n_face_points_ = 0;
    std::vector<double> ub_;
    /// Physical basis gradients at face points, [(e,f,q), i]; built only when jump terms are used.
    std::vector<Vec2> face_grad_;
};

}  // namespace rdent
