#pragma once

namespace blockopt {

double normal_pdf(double x);
double normal_cdf(double x);

/// Expected improvement below `best` of Y ~ N(mu, sigma^2), for minimisation
/// and with no exploration offset. sigma == 0 degenerates to
/// max(best - mu, 0). Throws for negative sigma.
double expected_improvement(double mu, double sigma, double best);

}  // namespace blockopt
