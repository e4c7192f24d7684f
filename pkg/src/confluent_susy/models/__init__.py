"""Seed families: the free particle and the single-gap Lame potential."""
from .free import (
    DECAYING,
    GROWING,
    D_from_x0,
    free_partner_closed_form,
    free_potential,
    free_seed,
    kappa_from_energy,
    poschl_teller,
    x0_from_D,
)
from .lame import (
    BETA,
    INVERSE_BETA,
    LameSeed,
    SpectrumBands,
    bloch_decay_length,
    choose_branch,
    lame_bands,
    lame_bloch_factor,
    lame_bloch_u1,
    lame_delta_from_energy,
    lame_partner_closed_form,
    lame_potential,
    lame_seed,
    make_lame_seed,
)

__all__ = [
    "BETA", "DECAYING", "GROWING", "INVERSE_BETA", "D_from_x0", "LameSeed", "SpectrumBands",
    "bloch_decay_length", "choose_branch",
    "free_partner_closed_form", "free_potential", "free_seed", "kappa_from_energy",
    "lame_bands", "lame_bloch_factor", "lame_bloch_u1", "lame_delta_from_energy",
    "lame_partner_closed_form", "lame_potential", "lame_seed", "make_lame_seed",
    "poschl_teller", "x0_from_D",
]
