//! Local-extremum search on sampled traces.

/// A local maximum of a sampled signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Sample index of the maximum (middle sample of a flat top).
    pub index: usize,
    /// Sub-sample position from a three-point parabola.
    pub position: f64,
    /// Interpolated height at `position`.
    pub height: f64,
    /// Height above the higher of the two bases reached before a taller
    /// sample or the signal edge.
    pub prominence: f64,
}

/// Vertex of the parabola through `(-1, y0)`, `(0, y1)`, `(1, y2)` as
/// `(offset, value)`. Falls back to the centre sample when the three points
/// are collinear.
pub fn parabolic_vertex(y0: f64, y1: f64, y2: f64) -> (f64, f64) {
    let denom = y0 - 2.0 * y1 + y2;
    if denom.abs() < f64::EPSILON * (y0.abs() + y1.abs() + y2.abs()).max(f64::MIN_POSITIVE) {
        return (0.0, y1);
    }
    let offset = (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5);
    (offset, y1 - 0.25 * (y0 - y2) * offset)
}

fn refine(samples: &[f64], index: usize) -> (f64, f64) {
    if index == 0 || index + 1 >= samples.len() {
        return (index as f64, samples[index]);
    }
    let (offset, value) = parabolic_vertex(samples[index - 1], samples[index], samples[index + 1]);
    (index as f64 + offset, value)
}

fn prominence(samples: &[f64], index: usize) -> f64 {
    let top = samples[index];
    let mut left_min = top;
    for &v in samples[..index].iter().rev() {
        if v > top {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = top;
    for &v in &samples[index + 1..] {
        if v > top {
            break;
        }
        right_min = right_min.min(v);
    }
    top - left_min.max(right_min)
}

/// All interior local maxima whose prominence is at least `min_prominence`,
/// in index order.
pub fn find_peaks(samples: &[f64], min_prominence: f64) -> Vec<Peak> {
    let n = samples.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if samples[i - 1] < samples[i] {
            let mut j = i;
            while j + 1 < n && samples[j + 1] == samples[i] {
                j += 1;
            }
            if j + 1 < n && samples[j + 1] < samples[i] {
                let index = (i + j) / 2;
                let prom = prominence(samples, index);
                if prom >= min_prominence {
                    let (position, height) = if i == j {
                        refine(samples, index)
                    } else {
                        ((i + j) as f64 / 2.0, samples[index])
                    };
                    peaks.push(Peak {
                        index,
                        position,
                        height,
                        prominence: prom,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

/// Refined position and value of the smallest sample in `lo..=hi`.
pub fn minimum_in(samples: &[f64], lo: usize, hi: usize) -> Option<(f64, f64)> {
    if samples.is_empty() || lo > hi || lo >= samples.len() {
        return None;
    }
    let hi = hi.min(samples.len() - 1);
    let (index, _) = samples[lo..=hi]
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, v)| (lo + k, *v))?;
    if index == 0 || index + 1 >= samples.len() {
        return Some((index as f64, samples[index]));
    }
    let (offset, value) = parabolic_vertex(samples[index - 1], samples[index], samples[index + 1]);
    Some((index as f64 + offset, value))
}

/// Refined position and value of the largest sample in `lo..=hi`.
pub fn maximum_in(samples: &[f64], lo: usize, hi: usize) -> Option<(f64, f64)> {
    if samples.is_empty() || lo > hi || lo >= samples.len() {
        return None;
    }
    let hi = hi.min(samples.len() - 1);
    let (index, _) = samples[lo..=hi]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, v)| (lo + k, *v))?;
    Some(refine(samples, index))
}

/// Linear interpolation of the samples at a fractional index, clamped to
/// the ends.
pub fn sample_at(samples: &[f64], position: f64) -> f64 {
    let last = samples.len() - 1;
    if position <= 0.0 {
        return samples[0];
    }
    if position >= last as f64 {
        return samples[last];
    }
    let i = position.floor() as usize;
    let t = position - i as f64;
    samples[i] * (1.0 - t) + samples[i + 1] * t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_recovers_vertex() {
        // y = 3 - (x - 0.3)^2 sampled at -1, 0, 1
        let f = |x: f64| 3.0 - (x - 0.3) * (x - 0.3);
        let (off, val) = parabolic_vertex(f(-1.0), f(0.0), f(1.0));
        assert!((off - 0.3).abs() < 1e-12);
        assert!((val - 3.0).abs() < 1e-12);
    }

    #[test]
    fn finds_cosine_crests() {
        let n = 400;
        let s: Vec<f64> = (0..n)
            .map(|i| 1.0 + (2.0 * std::f64::consts::PI * i as f64 / 40.0).cos())
            .collect();
        let peaks = find_peaks(&s, 0.5);
        // crests at 40, 80, ..., 360; 0 is an edge
        assert_eq!(peaks.len(), 9);
        assert_eq!(peaks[0].index, 40);
        assert!(peaks.iter().all(|p| (p.height - 2.0).abs() < 1e-9));
    }

    #[test]
    fn prominence_filters_ripples() {
        let mut s = vec![0.0; 50];
        s[10] = 1.0;
        s[20] = 0.01;
        s[30] = 0.5;
        let peaks = find_peaks(&s, 0.02);
        assert_eq!(peaks.iter().map(|p| p.index).collect::<Vec<_>>(), vec![10, 30]);
        assert!((peaks[1].prominence - 0.5).abs() < 1e-12);
    }

    #[test]
    fn flat_top_counts_once() {
        let s = [0.0, 1.0, 2.0, 2.0, 2.0, 1.0, 0.0];
        let peaks = find_peaks(&s, 0.1);
        assert_eq!(peaks.len(), 1);
        assert_eq!(peaks[0].index, 3);
        assert_eq!(peaks[0].position, 3.0);
    }

    #[test]
    fn extremum_windows() {
        let s = [5.0, 4.0, 1.0, 4.0, 5.0, 9.0, 5.0];
        let (pos, val) = minimum_in(&s, 0, 4).unwrap();
        assert!((pos - 2.0).abs() < 1e-12 && (val - 1.0).abs() < 1e-12);
        let (pos, _) = maximum_in(&s, 3, 6).unwrap();
        assert!((pos - 5.0).abs() < 1e-12);
        assert!(minimum_in(&s, 9, 12).is_none());
        assert!((sample_at(&s, 1.5) - 2.5).abs() < 1e-12);
    }
}
