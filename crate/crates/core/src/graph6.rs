//! graph6 codec, bit-exact per the published format description: upper
//! triangle of the adjacency matrix in column order x(0,1), x(0,2), x(1,2),
//! x(0,3), ..., packed big-endian six bits per byte, offset by 63.

use crate::graph::{Graph, GraphError};

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        // n < 2^36
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

pub fn encode(g: &Graph) -> Vec<u8> {
    let n = g.n();
    let mut out = Vec::new();
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc <<= 1;
            if g.is_edge(i as u32, j as u32) {
                acc |= 1;
            }
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    out
}

pub fn encode_string(g: &Graph) -> String {
    String::from_utf8(encode(g)).expect("graph6 bytes are printable ASCII")
}

pub fn decode(data: &[u8]) -> Result<Graph, GraphError> {
    let data: &[u8] = match data.last() {
        Some(b'\n') => &data[..data.len() - 1],
        _ => data,
    };
    if data.is_empty() {
        return Err(GraphError::BadEdge);
    }
    let (n, body) = if data[0] == 126 {
        if data.len() >= 2 && data[1] == 126 {
            if data.len() < 8 {
                return Err(GraphError::BadEdge);
            }
            let mut n = 0usize;
            for &b in &data[2..8] {
                n = (n << 6) | (b as usize - 63);
            }
            (n, &data[8..])
        } else {
            if data.len() < 4 {
                return Err(GraphError::BadEdge);
            }
            let mut n = 0usize;
            for &b in &data[1..4] {
                n = (n << 6) | (b as usize - 63);
            }
            (n, &data[4..])
        }
    } else {
        ((data[0] - 63) as usize, &data[1..])
    };
    let nbits = n * (n - 1) / 2;
    if body.len() != nbits.div_ceil(6) {
        return Err(GraphError::BadEdge);
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = body[bit / 6];
            if !(63..127).contains(&byte) {
                return Err(GraphError::BadEdge);
            }
            let b = (byte - 63) >> (5 - bit % 6) & 1;
            if b == 1 {
                edges.push((i as u32, j as u32));
            }
            bit += 1;
            if bit >= nbits {
                break 'outer;
            }
        }
    }
    Graph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn k1_is_at_sign() {
        let g = Graph::empty(1);
        assert_eq!(encode_string(&g), "@");
    }

    #[test]
    fn known_small_graph() {
        // 5 vertices, edges 0-2, 0-4, 1-3, 3-4 encodes to "DQc"
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode_string(&g), "DQc");
        let back = decode(b"DQc").unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn medium_size_header() {
        // n > 62 takes the four-byte size header
        let g = Graph::empty(63);
        let bytes = encode(&g);
        assert_eq!(&bytes[..4], &[126, 63, 63, 126]);
    }

    proptest! {
        #[test]
        fn prop_roundtrip(n in 1usize..70, seed in any::<u64>()) {
            // cheap deterministic edge selection from the seed
            let mut s = seed;
            let mut edges = Vec::new();
            for i in 0..n as u32 {
                for j in i+1..n as u32 {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if s >> 63 == 1 {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let enc = encode(&g);
            let back = decode(&enc).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
