"""Reference parameter points shared across test modules."""

from wiretap_rates.gaussian import GeneralGaussianParams, OrthogonalGaussianParams

OG_POINT = OrthogonalGaussianParams(
    h_l=1.0, h_1m=0.8, h_2m=0.6, h_1c=0.5, h_2c=0.7,
    P_l=4.0, P_1e=2.0, P_2e=3.0,
    N_l=1.0, N_1e_m=1.0, N_2e_m=1.5, N_1e_c=0.8, N_2e_c=1.2,
)

GEN_POINT = GeneralGaussianParams(
    h_l=1.0, h_1e_l=0.5, h_2e_l=-0.4, h_l_1e=0.9, h_l_2e=0.7,
    h_2e_1e=0.3, h_1e_2e=0.6,
    P_l=4.0, P_1e=2.0, P_2e=3.0,
    N_l=1.0, N_1e=0.8, N_2e=1.2,
)
