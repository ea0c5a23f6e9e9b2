#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "lselast/assembly.hpp"
#include "lselast/gevp.hpp"
#include "lselast/mesh.hpp"

namespace lselast {

namespace detail {

inline std::string fmt_double(double v, const char* fmt = "%.16g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace detail

/// MatrixMarket coordinate format, 1-based indices.
inline void write_matrix_market(std::ostream& os, const SparseMat& m) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMat::InnerIterator it(m, k); it; ++it)
      os << it.row() + 1 << " " << it.col() + 1 << " " << detail::fmt_double(it.value()) << "\n";
}

/// One vertex per line "x y", then one cell per line "i j k".
inline void write_mesh_dump(std::ostream& os, const TriangleMesh& mesh) {
  for (const auto& v : mesh.vertices)
    os << detail::fmt_double(v.x) << " " << detail::fmt_double(v.y) << "\n";
  for (const auto& c : mesh.cells) os << c[0] << " " << c[1] << " " << c[2] << "\n";
}

/// CSV dump of a computed spectrum: index,re_omega,im_omega,residual,u_fraction
inline void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum,
                               const BlockSystem& sys) {
  os << "index,re_omega,im_omega,residual,u_fraction\n";
  int index = 1;
  for (const auto& pair : spectrum.finite) {
    const double u_fraction =
        pair.vector.size() > 0
            ? pair.vector.segment(sys.u_begin(), sys.n_u).norm() / pair.vector.norm()
            : 0.0;
    os << index++ << "," << detail::fmt_double(pair.omega.real()) << ","
       << detail::fmt_double(pair.omega.imag()) << "," << detail::fmt_double(pair.residual)
       << "," << detail::fmt_double(u_fraction) << "\n";
  }
}

}  // namespace lselast
