// Jacobi triple product and theta_hat'(0) = eta^3, printed as series.
#include <iostream>

#include "ellgen.hpp"

int main() {
  using namespace ellgen;
  const int N = 6;
  const qy_series product = theta_hat(N);
  const qy_series sum = theta_hat_sum_form(N);
  std::cout << "theta_hat (product form), through q^" << N << ":\n" << series_to_tsv(product);
  std::cout << "triple product holds: " << (first_difference(product, sum) ? "no" : "yes") << "\n";
  std::cout << "theta_hat'(0) = eta^3: " << (first_difference(theta_hat_x_linear(N), eta_power(3, N)) ? "no" : "yes")
            << "\n";
}
