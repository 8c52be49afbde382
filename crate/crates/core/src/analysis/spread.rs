/// Swap premia over the generic rate and their difference, in basis points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PremiumSpread {
    pub premium_a_bp: f64,
    pub premium_b_bp: f64,
    /// premium B − premium A.
    pub spread_bp: f64,
}

pub fn premium_spread(rate_a: f64, rate_b: f64, generic: f64) -> PremiumSpread {
    let premium_a_bp = (rate_a - generic) * 1e4;
    let premium_b_bp = (rate_b - generic) * 1e4;
    PremiumSpread {
        premium_a_bp,
        premium_b_bp,
        spread_bp: (rate_b - rate_a) * 1e4,
    }
}
