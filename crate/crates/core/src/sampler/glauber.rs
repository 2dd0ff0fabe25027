use rand::Rng;

use crate::cover::{Assignment, Cover, PartialColoring};

/// Heuristic burn-in: 50 steps per list element in the region. There is no
/// mixing guarantee behind this number.
pub fn default_burn_in(cover: &Cover, region: &[usize]) -> u64 {
    50 * region.iter().map(|&v| cover.list_size(v) as u64).sum::<u64>()
}

/// Runs `steps` heat-bath updates on the picks of `region`, keeping every pick
/// outside the region fixed. Each update chooses a region vertex uniformly and
/// redraws its pick uniformly from the blank and the free slots of its list.
pub fn glauber_run<R: Rng + ?Sized>(state: &mut Assignment<'_>, region: &[usize], steps: u64, rng: &mut R) {
    if region.is_empty() {
        return;
    }
    let mut options = Vec::new();
    for _ in 0..steps {
        let v = region[rng.gen_range(0..region.len())];
        state.set(v, None);
        options.clear();
        options.extend(state.free_slots(v));
        let r = rng.gen_range(0..=options.len());
        if let Some(&s) = options.get(r) {
            state.set(v, Some(s));
        }
    }
}

/// Chain state after `steps` updates from the empty set.
pub fn glauber_sample<R: Rng + ?Sized>(cover: &Cover, region: &[usize], steps: u64, rng: &mut R) -> PartialColoring {
    let mut state = Assignment::new(cover);
    glauber_run(&mut state, region, steps, rng);
    state.to_coloring()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{cover_from_lists, fixtures, random_cover, CoverMode};
    use crate::graph::Graph;
    use crate::seed;

    #[test]
    fn zero_steps_is_empty() {
        let c = fixtures::fig1_h1();
        let s = glauber_sample(&c, &[0, 1, 2, 3], 0, &mut seed::rng(1));
        assert_eq!(s, PartialColoring::new(4));
    }

    #[test]
    fn single_vertex_approaches_uniform() {
        let c = cover_from_lists(&Graph::empty(1), &[vec![1, 2]]).unwrap();
        let mut rng = seed::rng(2);
        let runs = 100_000;
        let mut counts = [0u32; 3];
        for _ in 0..runs {
            let s = glauber_sample(&c, &[0], 20, &mut rng);
            counts[s.pick(0).map_or(2, |p| p)] += 1;
        }
        let tv: f64 = counts.iter().map(|&c| (c as f64 / runs as f64 - 1.0 / 3.0).abs()).sum::<f64>() / 2.0;
        assert!(tv < 0.01, "tv {tv}");
    }

    #[test]
    fn states_stay_independent() {
        let g = crate::graph::generate(&crate::graph::Family::RandomTriangleFree { n: 30, d: 4.0, seed: 3 }).unwrap();
        let c = random_cover(&g, 3, 3, CoverMode::Perfect).unwrap();
        let region: Vec<usize> = (0..30).collect();
        let mut state = Assignment::new(&c);
        let mut rng = seed::rng(3);
        for _ in 0..500 {
            glauber_run(&mut state, &region, 1, &mut rng);
            assert!(c.is_independent(&state.to_coloring()).unwrap());
        }
        assert_eq!(default_burn_in(&c, &region), 50 * 90);
    }
}
