//! Successive cancellation list decoding with CRC-aided selection. Every
//! path owns a copy of the recursion state and a cumulative penalty
//! metric; contradicting a decision LLR costs its magnitude, at frozen
//! positions included. The reported answer is the best-metric path that
//! passes the CRC, or the best-metric path overall if none does.

use crate::codec::{extract_message_with_crc, Bit};
use crate::construction::CodeLayout;
use crate::crc::{crc_check, CrcSpec};
use crate::sc::{FreezeMask, KernelMode, PolarTree};

/// Result of one list decode.
#[derive(Debug, Clone)]
pub struct SclOutcome {
    /// Source estimate of the selected path.
    pub u_hat: Vec<Bit>,
    /// Whether the selected path passed the CRC.
    pub crc_pass: bool,
    /// Penalty metric of the selected path; lower is more likely.
    pub metric: f64,
    /// Number of live paths after each phase, for inspecting the pruning
    /// schedule.
    pub active_counts: Vec<usize>,
}

#[derive(Clone)]
struct Path {
    tree: PolarTree,
    u: Vec<Bit>,
    metric: f64,
}

/// List decoder bound to one code layout.
#[derive(Clone)]
pub struct SclDecoder {
    layout: CodeLayout,
    crc: Option<CrcSpec>,
    list_size: usize,
    kernel: KernelMode,
}

impl SclDecoder {
    /// `crc` enables CRC-aided selection; pass `None` for codes without a
    /// checksum, in which case the best-metric path wins.
    pub fn new(
        layout: CodeLayout,
        crc: Option<CrcSpec>,
        list_size: usize,
        kernel: KernelMode,
    ) -> Self {
        assert!(list_size >= 1);
        if let Some(spec) = &crc {
            assert_eq!(layout.k_crc(), spec.width);
        }
        SclDecoder {
            layout,
            crc,
            list_size,
            kernel,
        }
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    /// Decodes one block of channel LLRs.
    pub fn decode(&self, channel_llrs: &[f64], mask: &FreezeMask) -> SclOutcome {
        let n = self.layout.n;
        assert_eq!(channel_llrs.len(), n);
        assert_eq!(mask.len(), n);

        let mut seed = Path {
            tree: PolarTree::new(n),
            u: vec![0u8; n],
            metric: 0.0,
        };
        seed.tree.load_channel(channel_llrs);
        let mut paths = vec![seed];
        let mut active_counts = Vec::with_capacity(n);

        for phase in 0..n {
            for p in &mut paths {
                p.tree.calc_llr(phase, self.kernel);
            }
            match mask.frozen_value(phase) {
                Some(bit) => {
                    for p in &mut paths {
                        let llr = p.tree.decision_llr();
                        if (bit & 1) != u8::from(llr < 0.0) {
                            p.metric += llr.abs();
                        }
                        p.u[phase] = bit & 1;
                        p.tree.commit(phase, bit);
                    }
                }
                None => {
                    let mut cands: Vec<(f64, usize, u8)> = Vec::with_capacity(paths.len() * 2);
                    for (idx, p) in paths.iter().enumerate() {
                        let llr = p.tree.decision_llr();
                        let hard = u8::from(llr < 0.0);
                        for bit in 0..2u8 {
                            let penalty = if bit == hard { 0.0 } else { llr.abs() };
                            cands.push((p.metric + penalty, idx, bit));
                        }
                    }
                    cands.sort_by(|x, y| {
                        x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2))
                    });
                    cands.truncate(self.list_size);

                    let mut remaining = vec![0usize; paths.len()];
                    for &(_, idx, _) in &cands {
                        remaining[idx] += 1;
                    }
                    let mut pool: Vec<Option<Path>> = paths.into_iter().map(Some).collect();
                    let mut next = Vec::with_capacity(cands.len());
                    for &(metric, idx, bit) in &cands {
                        remaining[idx] -= 1;
                        let mut p = if remaining[idx] == 0 {
                            pool[idx].take().expect("parent path consumed once")
                        } else {
                            pool[idx].as_ref().expect("parent path still live").clone()
                        };
                        p.metric = metric;
                        p.u[phase] = bit;
                        p.tree.commit(phase, bit);
                        next.push(p);
                    }
                    paths = next;
                }
            }
            active_counts.push(paths.len());
        }

        let mut order: Vec<usize> = (0..paths.len()).collect();
        order.sort_by(|&a, &b| paths[a].metric.total_cmp(&paths[b].metric).then(a.cmp(&b)));

        let mut winner = order[0];
        let mut crc_pass = false;
        if let Some(spec) = &self.crc {
            for &i in &order {
                let message = extract_message_with_crc(&paths[i].u, &self.layout);
                if crc_check(&message, spec).expect("message longer than checksum") {
                    winner = i;
                    crc_pass = true;
                    break;
                }
            }
        }

        SclOutcome {
            u_hat: paths[winner].u.clone(),
            crc_pass,
            metric: paths[winner].metric,
            active_counts,
        }
    }
}
