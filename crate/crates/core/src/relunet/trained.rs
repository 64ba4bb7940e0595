//! Embedded weights of the trained DeLENO interpolation networks.
//!
//! Inputs must go through [`crate::eno_core::scale_input`] before
//! classification.

use super::{Activation, DenseLayer, MlpNetwork, OutputRule};
use crate::error::{Error, Result};

fn m<const C: usize>(rows: &[[f64; C]]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

fn transpose(w: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let cols = w[0].len();
    (0..cols).map(|c| w.iter().map(|r| r[c]).collect()).collect()
}

fn deleno3() -> Result<Vec<DenseLayer>> {
    let w1 = m(&[
        [1.1951, 2.0433, -11.7410, 5.6383],
        [2.9216, -2.8703, -2.5077, 2.4624],
        [-2.2775, 7.6890, -7.2667, 2.4914],
        [3.2909, -5.8431, -5.6085, 3.4171],
    ]);
    let b1 = vec![-0.1069, -0.3615, 0.0389, 0.0605];
    let w2 = m(&[
        [-11.6122, 4.2986, 10.7356, 8.1240],
        [11.5929, -4.2767, -10.7357, -8.1316],
    ]);
    let b2 = vec![-2.5193, 2.4493];
    Ok(vec![
        DenseLayer::new(w1, b1, Activation::Relu)?,
        DenseLayer::new(w2, b2, Activation::Identity)?,
    ])
}

fn deleno4() -> Result<Vec<DenseLayer>> {
    let w1 = m(&[
        [-0.0559, -1.0026, 1.1115, 1.0011, -1.0569, -0.0001],
        [-0.3547, 0.3557, -0.8777, 2.0707, -1.1983, -0.0051],
        [-0.0060, -0.6155, 1.6342, -1.4526, 0.4599, -0.0370],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0011, -0.1965, 0.7964, -1.1817, 0.7805, -0.1913],
        [-0.3324, 1.2088, -1.6946, 1.0632, -0.2479, -0.0043],
        [0.1432, -0.6459, 0.9448, -0.5434, 0.1271, -0.0154],
        [-0.0076, -0.4239, 0.8604, -0.0248, -0.8755, 0.4517],
        [0.0196, -0.1527, 0.6286, -0.9194, 0.6069, -0.1619],
        [-0.0088, -0.2571, 1.0627, -1.6288, 1.0899, -0.2714],
    ]);
    let b1 = vec![-0.0005, 0.0029, -0.0005, -0.1217, 0.0012, 0.0007, -0.0010, 0.0010, 0.0027, -0.0005];
    // printed as its transpose
    let w2 = transpose(m(&[
        [0.0, 1.6803, 0.2910, -3.1738, 0.0, 1.5946],
        [0.0, -1.9935, -0.7975, 3.2015, 0.0, -1.9124],
        [0.0, -0.3125, 2.7085, 0.7264, 0.0, -0.2819],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, -1.3886, 0.6976, 0.6071, 0.0, -1.3514],
        [0.0, 2.1097, 0.8511, -3.6655, 0.0, 2.0568],
        [0.0, 0.6645, 0.1485, -1.2784, 0.0, 0.5052],
        [0.0, -0.0061, -1.4376, -0.0073, 0.0, -0.0082],
        [0.0, 0.4580, -1.0432, 0.0474, 0.0, 0.4542],
        [0.0, 0.6597, -2.6379, -0.4588, 0.0, 0.7357],
    ]));
    let b2 = vec![-0.0349, 0.0993, 0.0463, 0.0284, -0.0570, 0.0438];
    let w3 = m(&[
        [0.0; 6],
        [0.0; 6],
        [0.0, 8.0933, 0.6463, -5.7734, 0.0, 8.3502],
        [0.0, 2.0780, -10.0148, -0.3565, 0.0, 1.8241],
    ]);
    let b3 = vec![-0.0316, -0.0432, -0.3800, 0.4131];
    let w4 = m(&[
        [0.0, 0.0, 2.3377, -11.5452],
        [0.0, 0.0, 2.2965, 11.1520],
        [0.0, 0.0, -12.6485, -0.8555],
    ]);
    let b4 = vec![1.6841, -7.5807, 8.2575];
    Ok(vec![
        DenseLayer::new(w1, b1, Activation::Relu)?,
        DenseLayer::new(w2, b2, Activation::Relu)?,
        DenseLayer::new(w3, b3, Activation::Relu)?,
        DenseLayer::new(w4, b4, Activation::Identity)?,
    ])
}

/// Trained interpolation network for `p` in {3, 4}.
pub fn trained_deleno(p: usize) -> Result<MlpNetwork> {
    let layers = match p {
        3 => deleno3()?,
        4 => deleno4()?,
        _ => return Err(Error::Unsupported(format!("no trained weights for p = {p}"))),
    };
    MlpNetwork::new(2 * p - 2, layers, OutputRule::MinArgMax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_constants() {
        let n3 = trained_deleno(3).unwrap();
        assert_eq!(n3.layers()[1].bias, vec![-2.5193, 2.4493]);
        assert_eq!(n3.layers()[0].weights[2][1], 7.6890);
        let n4 = trained_deleno(4).unwrap();
        assert_eq!(n4.hidden_widths(), vec![10, 6, 4]);
        assert_eq!(n4.layers()[0].weights[0][3], 1.0011);
        assert_eq!(n4.layers()[1].weights[1][0], 1.6803);
        assert_eq!(n4.layers()[1].weights[3][9], -0.4588);
        assert_eq!(n4.layers()[3].bias, vec![1.6841, -7.5807, 8.2575]);
        assert!(trained_deleno(5).is_err());
    }
}
