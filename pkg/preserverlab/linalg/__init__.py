"""Dense complex kernels, hermitian coordinates and sampling."""
