#include "fuzzybox/banded.hpp"

#include "fuzzybox/csvio.hpp"

namespace fuzzybox {

void BandedOperator::write_csv(std::ostream& os) const {
    os << "row,col,x_row [q0],real,imag\n";
    for (int j = 0; j < grid_.n; ++j)
        for (int k = std::max(0, j - bw_); k <= std::min(grid_.n - 1, j + bw_); ++k) {
            const std::complex<double> v = get(j, k);
            os << j << ',' << k << ',' << csv::format_float(grid_.x(j)) << ','
               << csv::format_float(v.real()) << ',' << csv::format_float(v.imag()) << '\n';
        }
}

} // namespace fuzzybox
