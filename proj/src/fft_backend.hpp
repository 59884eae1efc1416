// Internal FFTW shim: cached in-place c2c plans per grid size.
#pragma once

#include <complex>

namespace magtorus::detail {

// Unnormalized DFTs on an M x M row-major complex grid.
// forward:  X_k = sum_j x_j exp(-2*pi*i*<j,k>/M)
// backward: x_j = sum_k X_k exp(+2*pi*i*<j,k>/M)
void dft2_forward(std::complex<double>* data, int resolution);
void dft2_backward(std::complex<double>* data, int resolution);

}  // namespace magtorus::detail
