use std::collections::{BTreeMap, BTreeSet};

use ontodem_ontology::{concept_weight, ConceptId, InstanceId, ObservationSchema, Ontology, TemporalContext};
use rand::Rng;

use crate::error::ObservationError;
use crate::masking::retain_instances;

/// One concept's share request: its importance weight and how many
/// instances of it are available.
#[derive(Clone, Debug, PartialEq)]
pub struct Stratum {
    pub concept: ConceptId,
    pub weight: f64,
    pub available: usize,
}

/// Splits a budget of `size` draws across strata in proportion to weight.
///
/// No stratum receives more than it has available; the surplus is
/// redistributed among the others. Fractional shares are rounded by the
/// largest-remainder rule with ties going to the lexicographically smaller
/// concept. When every weight is zero the split is uniform, and budget left
/// after all positive-weight strata are exhausted goes uniformly to the
/// zero-weight ones. The counts always sum to `min(size, total available)`.
pub fn allocate(strata: &[Stratum], size: usize) -> BTreeMap<ConceptId, usize> {
    let mut counts: BTreeMap<ConceptId, usize> = strata.iter().map(|s| (s.concept.clone(), 0)).collect();
    let population: usize = strata.iter().map(|s| s.available).sum();
    let mut budget = size.min(population);
    let positive: Vec<(&ConceptId, f64, usize)> = strata
        .iter()
        .filter(|s| s.weight > 0.0 && s.available > 0)
        .map(|s| (&s.concept, s.weight, s.available))
        .collect();
    let zero: Vec<(&ConceptId, f64, usize)> =
        strata.iter().filter(|s| s.weight <= 0.0 && s.available > 0).map(|s| (&s.concept, 1.0, s.available)).collect();
    for group in [positive, zero] {
        if budget == 0 {
            break;
        }
        budget -= water_fill(&group, budget, &mut counts);
    }
    counts
}

fn water_fill(group: &[(&ConceptId, f64, usize)], budget: usize, counts: &mut BTreeMap<ConceptId, usize>) -> usize {
    let capacity: usize = group.iter().map(|g| g.2).sum();
    if capacity <= budget {
        for (c, _, n) in group {
            *counts.get_mut(*c).expect("known stratum") += n;
        }
        return capacity;
    }
    let mut active: Vec<usize> = (0..group.len()).collect();
    let mut remaining = budget;
    loop {
        let total: f64 = active.iter().map(|&k| group[k].1).sum();
        let saturated: Vec<usize> =
            active.iter().copied().filter(|&k| remaining as f64 * group[k].1 / total >= group[k].2 as f64).collect();
        if saturated.is_empty() {
            break;
        }
        for &k in &saturated {
            *counts.get_mut(group[k].0).expect("known stratum") = group[k].2;
            remaining -= group[k].2;
        }
        active.retain(|k| !saturated.contains(k));
    }
    let total: f64 = active.iter().map(|&k| group[k].1).sum();
    let mut shares: Vec<(usize, f64)> = Vec::with_capacity(active.len());
    let mut assigned = 0;
    for &k in &active {
        let quota = remaining as f64 * group[k].1 / total;
        let whole = (quota.floor() as usize).min(group[k].2);
        *counts.get_mut(group[k].0).expect("known stratum") = whole;
        assigned += whole;
        shares.push((k, quota - whole as f64));
    }
    shares.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| group[a.0].0.cmp(group[b.0].0)));
    let mut left = remaining - assigned;
    for (k, _) in shares {
        if left == 0 {
            break;
        }
        let slot = counts.get_mut(group[k].0).expect("known stratum");
        if *slot < group[k].2 {
            *slot += 1;
            left -= 1;
        }
    }
    budget
}

/// Importance weight of each observed concept: the mean concept weight of
/// its instances.
pub fn concept_strata(
    schema: &ObservationSchema,
    ontology: &Ontology,
    ctx: Option<&TemporalContext>,
) -> Result<Vec<Stratum>, ObservationError> {
    let mut acc: BTreeMap<&ConceptId, (f64, usize)> = BTreeMap::new();
    for (i, c) in schema.instances() {
        let w = concept_weight(i, schema, ontology, ctx)?;
        let e = acc.entry(c).or_insert((0.0, 0));
        e.0 += w;
        e.1 += 1;
    }
    Ok(acc
        .into_iter()
        .map(|(c, (sum, n))| Stratum { concept: c.clone(), weight: sum / n as f64, available: n })
        .collect())
}

/// Keeps `size` instances drawn per concept in proportion to concept
/// importance, without replacement.
pub fn sample_observation<R: Rng + ?Sized>(
    schema: &ObservationSchema,
    ontology: &Ontology,
    ctx: Option<&TemporalContext>,
    size: usize,
    rng: &mut R,
) -> Result<ObservationSchema, ObservationError> {
    if size == 0 {
        return Err(ObservationError::ZeroSampleSize);
    }
    if size >= schema.instances().len() {
        return Ok(schema.clone());
    }
    let quota = allocate(&concept_strata(schema, ontology, ctx)?, size);
    let mut by_concept: BTreeMap<&ConceptId, Vec<&InstanceId>> = BTreeMap::new();
    for (i, c) in schema.instances() {
        by_concept.entry(c).or_default().push(i);
    }
    let mut keep = BTreeSet::new();
    for (c, members) in by_concept {
        let k = quota[c];
        for idx in rand::seq::index::sample(rng, members.len(), k) {
            keep.insert(members[idx].clone());
        }
    }
    Ok(retain_instances(schema, &keep))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &str, weight: f64, available: usize) -> Stratum {
        Stratum { concept: c.into(), weight, available }
    }

    fn get(m: &BTreeMap<ConceptId, usize>, c: &str) -> usize {
        m[&ConceptId::from(c)]
    }

    #[test]
    fn proportional_split() {
        let a = allocate(&[s("A", 0.6, 100), s("B", 0.3, 100), s("C", 0.1, 100)], 10);
        assert_eq!((get(&a, "A"), get(&a, "B"), get(&a, "C")), (6, 3, 1));
    }

    #[test]
    fn remainder_ties_go_to_smaller_id() {
        let a = allocate(&[s("B", 1.0, 10), s("A", 1.0, 10), s("C", 1.0, 10)], 4);
        assert_eq!((get(&a, "A"), get(&a, "B"), get(&a, "C")), (2, 1, 1));
    }

    #[test]
    fn capped_stratum_surplus_redistributed() {
        let a = allocate(&[s("A", 0.9, 2), s("B", 0.1, 50)], 10);
        assert_eq!((get(&a, "A"), get(&a, "B")), (2, 8));
    }

    #[test]
    fn zero_weights_split_uniformly() {
        let a = allocate(&[s("A", 0.0, 5), s("B", 0.0, 5)], 4);
        assert_eq!((get(&a, "A"), get(&a, "B")), (2, 2));
    }

    #[test]
    fn zero_weight_strata_take_leftover() {
        let a = allocate(&[s("A", 0.5, 1), s("B", 0.0, 5)], 3);
        assert_eq!((get(&a, "A"), get(&a, "B")), (1, 2));
    }

    #[test]
    fn budget_beyond_population_takes_everything() {
        let a = allocate(&[s("A", 0.5, 2), s("B", 0.1, 3)], 100);
        assert_eq!((get(&a, "A"), get(&a, "B")), (2, 3));
    }
}
