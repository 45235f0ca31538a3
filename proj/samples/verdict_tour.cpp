// Runs the verdict on a handful of pairs and prints the certificate summary.
#include <iostream>

#include "lfcomp/lfcomp.hpp"

using namespace lfcomp;

namespace {

LinFracMap diag(std::initializer_list<Complex> entries) {
  const int n = static_cast<int>(entries.size());
  CMatrix a = CMatrix::Zero(n, n);
  int i = 0;
  for (Complex e : entries) {
    a(i, i) = e;
    ++i;
  }
  return LinFracMap::linear(a);
}

void run(const char* name, const LinFracMap& phi, const LinFracMap& psi) {
  const Verdict v = compactness_verdict(phi, psi, SpaceSpec::hardy(phi.dim()));
  std::cout << name << ": " << to_string(v.outcome);
  if (v.certificate) {
    std::cout << " [" << to_string(v.certificate->kind) << ", inf " << v.certificate->quantity << " = "
              << v.certificate->claimed_inf << "]";
  }
  std::cout << "\n";
}

}  // namespace

int main() {
  run("z/2 vs z/3", diag({0.5}), diag({1.0 / 3.0}));
  run("identity vs z/2", diag({1.0}), diag({0.5}));
  CMatrix half(1, 1);
  half << 0.5;
  CVector shift(1);
  shift << 0.5;
  run("(z+1)/2 vs identity", LinFracMap::affine(half, shift), diag({1.0}));
  SiegelParabolicForm t1{CVector(0), Complex(1.0, 1.0), CMatrix(0, 0), CVector(0)};
  SiegelParabolicForm t2{CVector(0), Complex(2.0, 1.0), CMatrix(0, 0), CVector(0)};
  run("two Siegel translations", from_siegel_parabolic(t1), from_siegel_parabolic(t2));
  run("(z1, z2/2) vs identity", diag({1.0, 0.5}), diag({1.0, 1.0}));
  return 0;
}
