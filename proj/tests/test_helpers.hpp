#ifndef APSTAT_TEST_HELPERS_HPP
#define APSTAT_TEST_HELPERS_HPP

#include <complex>
#include <string>
#include <vector>

#include "apstat/fourier_model.hpp"

#ifndef APSTAT_DATA_DIR
#define APSTAT_DATA_DIR "data"
#endif

namespace testutil {

inline std::string zeros_path() { return std::string(APSTAT_DATA_DIR) + "/zeta_zeros.txt"; }
inline std::string zprime_path() {
    return std::string(APSTAT_DATA_DIR) + "/zeta_zeros_zprime.csv";
}

inline apstat::spectra::FourierModel single(double lambda, apstat::cplx coeff,
                                            const std::string& label = "single") {
    return apstat::spectra::FourierModel({{lambda, coeff}}, label);
}

}  // namespace testutil

#endif
