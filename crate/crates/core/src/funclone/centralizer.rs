use super::{same_carrier, CloneError, OpTable};
use crate::{index_tuple, tuple_index, tuples, Elem};

/// One commutation requirement `h(g(p1, …, pr)) = g(h(p1), …, h(pr))`, where the `p`s are
/// points of `A^k` and `g` acts on them coordinatewise.
struct Constraint {
    generator: usize,
    inputs: Vec<usize>,
    output: usize,
}

struct Search<'a> {
    generators: &'a [OpTable],
    constraints: Vec<Constraint>,
    /// Constraints mentioning each point, as input or output.
    watch: Vec<Vec<usize>>,
    order: Vec<usize>,
    values: Vec<Option<Elem>>,
    trail: Vec<usize>,
    carrier: usize,
    arity: usize,
    found: Vec<OpTable>,
    limit: usize,
}

/// All `k`-ary operations commuting with every generator, sorted by value table.
///
/// Equivalently, the `k`-ary operations preserving every generator graph. The search
/// assigns table cells depth-first, densest cells first, and propagates forced values
/// through the commutation equations as soon as all inputs of one are known.
pub fn centralizer_slice(
    generators: &[OpTable],
    k: usize,
    limit: usize,
) -> Result<Vec<OpTable>, CloneError> {
    let gen_refs: Vec<&OpTable> = generators.iter().collect();
    let carrier = same_carrier(&gen_refs)?;
    if k == 0 {
        return Err(CloneError::BadIndex { index: 0, arity: 0 });
    }
    let points = carrier.pow(k as u32);
    let coords: Vec<Vec<Elem>> = (0..points).map(|p| index_tuple(carrier, k, p)).collect();
    let mut constraints = Vec::new();
    for (gi, g) in generators.iter().enumerate() {
        let mut args = vec![0; g.arity()];
        for inputs in tuples(points, g.arity()) {
            let image: Vec<Elem> = (0..k)
                .map(|c| {
                    for (a, &p) in args.iter_mut().zip(&inputs) {
                        *a = coords[p][c];
                    }
                    g.apply(&args)
                })
                .collect();
            constraints.push(Constraint {
                generator: gi,
                output: tuple_index(carrier, &image),
                inputs,
            });
        }
    }
    let mut watch = vec![Vec::new(); points];
    for (ci, c) in constraints.iter().enumerate() {
        let mut touched: Vec<usize> = c.inputs.clone();
        touched.push(c.output);
        touched.sort_unstable();
        touched.dedup();
        for p in touched {
            watch[p].push(ci);
        }
    }
    let mut order: Vec<usize> = (0..points).collect();
    order.sort_by_key(|&p| std::cmp::Reverse(watch[p].len()));
    let mut search = Search {
        generators,
        constraints,
        watch,
        order,
        values: vec![None; points],
        trail: Vec::new(),
        carrier,
        arity: k,
        found: Vec::new(),
        limit,
    };
    search.descend(0)?;
    let mut found = search.found;
    found.sort();
    Ok(found)
}

impl Search<'_> {
    fn descend(&mut self, depth: usize) -> Result<(), CloneError> {
        let Some(&point) = self.order[depth..]
            .iter()
            .find(|&&p| self.values[p].is_none())
        else {
            if self.found.len() >= self.limit {
                return Err(CloneError::LimitExceeded {
                    what: "centralizer slice",
                    limit: self.limit,
                });
            }
            let values = self.values.iter().map(|v| v.expect("complete")).collect();
            self.found
                .push(OpTable::new(self.arity, self.carrier, values)?);
            return Ok(());
        };
        let next = self
            .order
            .iter()
            .position(|&p| p == point)
            .expect("point is ordered");
        for value in 0..self.carrier {
            let mark = self.trail.len();
            if self.assign(point, value) {
                self.descend(next + 1)?;
            }
            self.undo(mark);
        }
        Ok(())
    }

    /// Assigns and propagates; false on conflict. The trail records every assignment.
    fn assign(&mut self, point: usize, value: Elem) -> bool {
        self.values[point] = Some(value);
        self.trail.push(point);
        let mut queue = vec![point];
        while let Some(p) = queue.pop() {
            for &ci in &self.watch[p] {
                let c = &self.constraints[ci];
                let args: Option<Vec<Elem>> = c.inputs.iter().map(|&q| self.values[q]).collect();
                let Some(args) = args else { continue };
                let required = self.generators[c.generator].apply(&args);
                match self.values[c.output] {
                    Some(v) if v != required => return false,
                    Some(_) => {}
                    None => {
                        self.values[c.output] = Some(required);
                        self.trail.push(c.output);
                        queue.push(c.output);
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for p in self.trail.drain(mark..) {
            self.values[p] = None;
        }
    }
}
