use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::hypergraph::Hypergraph;
use crate::pattern::Component;

const NONE: usize = usize::MAX;

/// The order-`r` edges of a host, renumbered `0..m` in host order, with
/// vertex incidence lists.
#[derive(Debug, Clone)]
pub(crate) struct Host<'a> {
    graph: &'a Hypergraph,
    local: Vec<usize>,
    incidence: Vec<Vec<usize>>,
}

impl<'a> Host<'a> {
    pub(crate) fn new(graph: &'a Hypergraph, r: usize) -> Self {
        let local: Vec<usize> = (0..graph.edge_count())
            .filter(|&i| graph.edge(i).len() == r)
            .collect();
        let mut incidence = vec![Vec::new(); graph.vertex_count()];
        for (l, &h) in local.iter().enumerate() {
            for &v in graph.edge(h) {
                incidence[v].push(l);
            }
        }
        Host {
            graph,
            local,
            incidence,
        }
    }

    pub(crate) fn edge(&self, l: usize) -> &'a [usize] {
        self.graph.edge(self.local[l])
    }

    pub(crate) fn host_index(&self, l: usize) -> usize {
        self.local[l]
    }

    pub(crate) fn local_index(&self, host_edge: usize) -> Option<usize> {
        self.local.binary_search(&host_edge).ok()
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.local.len()
    }

    pub(crate) fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub(crate) fn touched_vertices(&self) -> usize {
        self.incidence.iter().filter(|l| !l.is_empty()).count()
    }

    /// Degree of `v` counting only edges that avoid every blocked vertex.
    fn free_degree(&self, v: usize, blocked: &[bool]) -> usize {
        self.incidence[v]
            .iter()
            .filter(|&&f| self.edge(f).iter().all(|&w| !blocked[w]))
            .count()
    }
}

/// Depth-first search over host-edge sequences, one component after another.
///
/// Components are filled in order. Each partial sequence determines the next
/// admissible edges, and candidates are tried in ascending order, so the first
/// complete sequence found is the lexicographically least.
#[derive(Debug, Clone)]
pub(crate) struct Search<'h, 'a> {
    host: &'h Host<'a>,
    comps: Vec<Component>,
    reduced: bool,
    centre: Option<usize>,
    forced: Option<usize>,
    hitting: Option<Vec<usize>>,
    used: Vec<bool>,
    seq: Vec<usize>,
    joints: Vec<usize>,
    starts: Vec<usize>,
    marks: Vec<usize>,
    mark_len: Vec<usize>,
}

impl<'h, 'a> Search<'h, 'a> {
    pub(crate) fn new(host: &'h Host<'a>, comps: Vec<Component>, reduced: bool) -> Self {
        Search {
            host,
            comps,
            reduced,
            centre: None,
            forced: None,
            hitting: None,
            used: vec![false; host.vertex_count()],
            seq: Vec::new(),
            joints: Vec::new(),
            starts: Vec::new(),
            marks: Vec::new(),
            mark_len: Vec::new(),
        }
    }

    pub(crate) fn with_centre(mut self, centre: Option<usize>) -> Self {
        self.centre = centre;
        self
    }

    pub(crate) fn with_forced(mut self, forced: Option<usize>) -> Self {
        self.forced = forced;
        self
    }

    pub(crate) fn with_hitting(mut self, hitting: Option<Vec<usize>>) -> Self {
        self.hitting = hitting;
        self
    }

    pub(crate) fn with_blocked(mut self, blocked: &[usize]) -> Self {
        for &v in blocked {
            self.used[v] = true;
        }
        self
    }

    /// First complete sequence in lexicographic order.
    pub(crate) fn first(&mut self) -> Option<Vec<usize>> {
        let mut found = None;
        let _ = self.run(&mut |seq| {
            found = Some(seq.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    /// Some complete sequence, exploring first-edge subtrees in parallel.
    pub(crate) fn any_parallel(&self) -> Option<Vec<usize>> {
        if self.comps.is_empty() {
            return Some(Vec::new());
        }
        let candidates = self.first_candidates(0);
        candidates.par_iter().find_map_any(|&f| {
            let mut worker = self.clone();
            worker.starts.push(0);
            worker.push(f, NONE);
            let mut found = None;
            let _ = worker.extend(0, &mut |seq| {
                found = Some(seq.to_vec());
                ControlFlow::Break(())
            });
            found
        })
    }

    pub(crate) fn run(
        &mut self,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        self.component(0, visit)
    }

    fn count_used(&self, f: usize) -> usize {
        self.host.edge(f).iter().filter(|&&v| self.used[v]).count()
    }

    fn push(&mut self, f: usize, joint: usize) {
        self.mark_len.push(self.marks.len());
        for &v in self.host.edge(f) {
            if !self.used[v] {
                self.used[v] = true;
                self.marks.push(v);
            }
        }
        self.seq.push(f);
        self.joints.push(joint);
    }

    fn pop(&mut self) {
        let keep = self.mark_len.pop().expect("balanced push/pop");
        for v in self.marks.drain(keep..) {
            self.used[v] = false;
        }
        self.seq.pop();
        self.joints.pop();
    }

    fn first_candidates(&self, c: usize) -> Vec<usize> {
        let floor = if self.reduced && c > 0 && self.comps[c - 1] == self.comps[c] {
            Some(self.seq[self.starts[c - 1]])
        } else {
            None
        };
        let lone_star = matches!(self.comps[c], Component::Star(_)) && self.comps.len() == 1;
        (0..self.host.edge_count())
            .filter(|&f| floor.is_none_or(|x| f > x))
            .filter(|&f| self.count_used(f) == 0)
            .filter(|&f| match self.centre {
                Some(z) if lone_star => self.host.edge(f).contains(&z),
                _ => true,
            })
            .collect()
    }

    fn component(
        &mut self,
        c: usize,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if c == self.comps.len() {
            if let Some(e) = self.forced {
                if !self.seq.contains(&e) {
                    return ControlFlow::Continue(());
                }
            }
            return visit(&self.seq);
        }
        if let Some(e) = self.forced {
            // later components must avoid everything already placed
            if !self.seq.contains(&e) && self.count_used(e) > 0 {
                return ControlFlow::Continue(());
            }
        }
        if let Some(u) = &self.hitting {
            let free = u.iter().filter(|&&v| !self.used[v]).count();
            if self.comps.len() - c > free {
                return ControlFlow::Continue(());
            }
        }
        self.starts.push(self.seq.len());
        for f in self.first_candidates(c) {
            self.push(f, NONE);
            let flow = self.extend(c, visit);
            self.pop();
            if flow.is_break() {
                self.starts.pop();
                return flow;
            }
        }
        self.starts.pop();
        ControlFlow::Continue(())
    }

    fn extend(
        &mut self,
        c: usize,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let start = self.starts[c];
        let pos = self.seq.len() - start;
        let comp = self.comps[c];
        if pos == comp.length() {
            return self.component(c + 1, visit);
        }
        for (f, joint) in self.step_candidates(comp, start, pos) {
            self.push(f, joint);
            let flow = self.extend(c, visit);
            self.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn step_candidates(&self, comp: Component, start: usize, pos: usize) -> Vec<(usize, usize)> {
        let first = self.seq[start];
        let last = *self.seq.last().expect("component has a first edge");
        let prev_joint = *self.joints.last().expect("component has a first edge");
        let mut out = Vec::new();
        match comp {
            Component::Path(len) => {
                let closing = pos + 1 == len;
                for &w in self.host.edge(last) {
                    if w == prev_joint {
                        continue;
                    }
                    for &f in &self.host.incidence[w] {
                        if self.count_used(f) != 1 {
                            continue;
                        }
                        if self.reduced && closing && f < first {
                            continue;
                        }
                        out.push((f, w));
                    }
                }
            }
            Component::Star(_) => {
                if pos == 1 {
                    for &w in self.host.edge(first) {
                        if self.centre.is_some_and(|z| z != w) && self.comps.len() == 1 {
                            continue;
                        }
                        for &f in &self.host.incidence[w] {
                            if self.count_used(f) == 1 && (!self.reduced || f > first) {
                                out.push((f, w));
                            }
                        }
                    }
                } else {
                    let centre = self.joints[start + 1];
                    for &f in &self.host.incidence[centre] {
                        if self.count_used(f) == 1 && (!self.reduced || f > last) {
                            out.push((f, centre));
                        }
                    }
                }
            }
            Component::Cycle(len) => {
                let closing = pos + 1 == len;
                let first_joint = if pos >= 2 {
                    self.joints[start + 1]
                } else {
                    NONE
                };
                for &w in self.host.edge(last) {
                    if w == prev_joint {
                        continue;
                    }
                    for &f in &self.host.incidence[w] {
                        if self.reduced && f < first {
                            continue;
                        }
                        if !closing {
                            if self.count_used(f) == 1 {
                                out.push((f, w));
                            }
                            continue;
                        }
                        if self.reduced && f < self.seq[start + 1] {
                            continue;
                        }
                        let mut others = self
                            .host
                            .edge(f)
                            .iter()
                            .filter(|&&v| self.used[v] && v != w);
                        let (Some(&x), None) = (others.next(), others.next()) else {
                            continue;
                        };
                        if x != first_joint && self.host.edge(first).contains(&x) {
                            out.push((f, w));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Greedy vertex set `U` such that no component of `comps` embeds in the host
/// with `U` deleted. Every embedded component then meets `U`, so at most `|U|`
/// vertex-disjoint components fit. Returns `None` once `U` grows to the
/// component count, where it can no longer prune.
pub(crate) fn hitting_set(host: &Host<'_>, comps: &[Component]) -> Option<Vec<usize>> {
    let mut kinds: Vec<Component> = comps.to_vec();
    kinds.dedup();
    let mut chosen: Vec<usize> = Vec::new();
    let mut blocked = vec![false; host.vertex_count()];
    'grow: loop {
        for &kind in &kinds {
            let mut search = Search::new(host, vec![kind], true).with_blocked(&chosen);
            if let Some(seq) = search.first() {
                if chosen.len() + 1 >= comps.len() {
                    return None;
                }
                let mut best = (0, NONE);
                for &f in &seq {
                    for &v in host.edge(f) {
                        let d = host.free_degree(v, &blocked);
                        if d > best.0 || (d == best.0 && v < best.1) {
                            best = (d, v);
                        }
                    }
                }
                chosen.push(best.1);
                blocked[best.1] = true;
                continue 'grow;
            }
        }
        return Some(chosen);
    }
}
