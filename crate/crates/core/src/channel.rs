//! BPSK over AWGN with LLR output. Noise power follows the Eb/N0
//! convention at a caller-supplied effective rate, so systems with
//! different overhead are compared at equal energy per payload bit.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::codec::Bit;

/// Eb/N0 operating point and the derived noise scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma: f64,
}

impl ChannelParams {
    /// `rate` is the effective payload rate used for the Eb/N0 to noise
    /// conversion: sigma^2 = 1 / (2 rate 10^(ebn0/10)).
    pub fn new(ebn0_db: f64, rate: f64) -> Self {
        assert!(ebn0_db.is_finite());
        assert!(rate > 0.0 && rate <= 1.0);
        let sigma = (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt();
        ChannelParams {
            ebn0_db,
            rate,
            sigma,
        }
    }

    pub fn noise_variance(&self) -> f64 {
        self.sigma * self.sigma
    }

    /// Mean of the LLR conditioned on a transmitted zero bit.
    pub fn llr_mean(&self) -> f64 {
        2.0 / self.noise_variance()
    }
}

/// Maps bits to +-1, adds white Gaussian noise, and demodulates to LLRs.
pub fn transmit(x: &[Bit], params: &ChannelParams, rng: &mut impl Rng) -> Vec<f64> {
    let var = params.noise_variance();
    x.iter()
        .map(|&b| {
            let z: f64 = rng.sample(StandardNormal);
            let y = 1.0 - 2.0 * f64::from(b & 1) + params.sigma * z;
            2.0 * y / var
        })
        .collect()
}
