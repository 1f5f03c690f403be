//! Magnetic potential, field tensor, Maxwell residual and shift gauge functions.
#pragma once

#include "curvedmag/geometry.hpp"

namespace curvedmag {

//! Lambda and its partials in the shifted chart.
struct GaugeEvaluation {
    double lambda_value = 0;
    double dLambda_dr = 0;
    double dLambda_dphi = 0;
};

//! Field tensor components in the shifted chart after pullback.
struct PulledBackField {
    double f_phi_r = 0;
    double f_phi_z = 0;
    double f_r_z = 0;
};

//! Covariant potential components in the shifted chart after pullback.
struct PulledBackPotential {
    double a_r = 0;
    double a_phi = 0;
    double a_z = 0;
};

//! A_phi: -B(cosh r - 1), B(cos r - 1), -B r^2/2.
double potential_phi(SpaceModel m, double B, double r);

//! F_{phi r}: B sinh r, B sin r, B r.
double field_strength(SpaceModel m, double B, double r);

//! (1/sqrt g) d_r(sqrt g F^{r phi}) by central differences.
double maxwell_residual(SpaceModel m, double B, const CylPoint& p, double h = 1e-6);

//! Closed-form Lambda (gauge constant zero) with its partials. Plane01, or
//! Plane02 through an azimuth rotation by pi/2.
GaugeEvaluation gauge_function(SpaceModel m, const TransversalShift& s, double B,
                               const CylPoint& p_shifted);

//! Partials only; regular where the arctan form of Lambda jumps.
GaugeEvaluation gauge_partials(SpaceModel m, const TransversalShift& s, double B,
                               const CylPoint& p_shifted);

PulledBackField pullback_field(SpaceModel m, const TransversalShift& s, double B,
                               const CylPoint& p_shifted);

PulledBackPotential pullback_potential(SpaceModel m, const TransversalShift& s, double B,
                                       const CylPoint& p_shifted);

//! |F'_{phi' r'} - B sinh r'| (or sin r') at the image of p, where F' is the
//! tensor pullback through the shift Jacobian.
double verify_field_invariance(SpaceModel m, const TransversalShift& s, double B,
                               const CylPoint& p);

}  // namespace curvedmag
