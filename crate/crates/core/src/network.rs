//! Optical networks as directed acyclic graphs of port-to-port edges.
//!
//! Every element has a fixed number of input and output ports. An edge joins
//! one output port to one input port and carries a single complex mode
//! amplitude. Unused beamsplitter inputs are fed by [`SourceKind::Vacuum`]
//! sources so every port is always connected.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::field::BeamsplitterSpec;
use crate::scalar::Scalar;

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    /// The prepared single photon (unit amplitude in the quantum reference).
    Photon,
    /// A port with no prepared beam; hidden background fields may enter here.
    Vacuum,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element<T> {
    Source(SourceKind),
    Beamsplitter(BeamsplitterSpec<T>),
    /// Multiplies the passing amplitude by `exp(i * phase)`.
    PhaseShifter(T),
    Detector,
}

impl<T> Element<T> {
    pub fn input_ports(&self) -> usize {
        match self {
            Element::Source(_) => 0,
            Element::Beamsplitter(_) => 2,
            Element::PhaseShifter(_) | Element::Detector => 1,
        }
    }

    pub fn output_ports(&self) -> usize {
        match self {
            Element::Detector => 0,
            Element::Beamsplitter(_) => 2,
            Element::PhaseShifter(_) | Element::Source(_) => 1,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Element::Source(_) => "source",
            Element::Beamsplitter(_) => "beamsplitter",
            Element::PhaseShifter(_) => "phase shifter",
            Element::Detector => "detector",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node<T> {
    pub label: String,
    pub element: Element<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Port {
    pub node: NodeId,
    pub port: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub from: Port,
    pub to: Port,
}

/// Incrementally assembles an [`OpticalNetwork`]; all checks run in [`NetworkBuilder::build`].
#[derive(Debug, Clone)]
pub struct NetworkBuilder<T> {
    nodes: Vec<Node<T>>,
    edges: Vec<Edge>,
}

impl<T: Scalar> Default for NetworkBuilder<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> NetworkBuilder<T> {
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add(&mut self, label: impl Into<String>, element: Element<T>) -> NodeId {
        self.nodes.push(Node {
            label: label.into(),
            element,
        });
        self.nodes.len() - 1
    }

    pub fn photon(&mut self, label: impl Into<String>) -> NodeId {
        self.add(label, Element::Source(SourceKind::Photon))
    }

    pub fn vacuum(&mut self, label: impl Into<String>) -> NodeId {
        self.add(label, Element::Source(SourceKind::Vacuum))
    }

    pub fn beamsplitter(&mut self, label: impl Into<String>, spec: BeamsplitterSpec<T>) -> NodeId {
        self.add(label, Element::Beamsplitter(spec))
    }

    pub fn phase_shifter(&mut self, label: impl Into<String>, phase: T) -> NodeId {
        self.add(label, Element::PhaseShifter(phase))
    }

    pub fn detector(&mut self, label: impl Into<String>) -> NodeId {
        self.add(label, Element::Detector)
    }

    /// Joins output port `from.1` of `from.0` to input port `to.1` of `to.0`.
    pub fn connect(&mut self, label: impl Into<String>, from: (NodeId, usize), to: (NodeId, usize)) -> EdgeId {
        self.edges.push(Edge {
            label: label.into(),
            from: Port {
                node: from.0,
                port: from.1,
            },
            to: Port { node: to.0, port: to.1 },
        });
        self.edges.len() - 1
    }

    pub fn build(self) -> Result<OpticalNetwork<T>> {
        OpticalNetwork::from_parts(self.nodes, self.edges)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticalNetwork<T> {
    nodes: Vec<Node<T>>,
    edges: Vec<Edge>,
    inputs: Vec<Vec<EdgeId>>,
    outputs: Vec<Vec<EdgeId>>,
    order: Vec<NodeId>,
}

impl<T: Scalar> OpticalNetwork<T> {
    pub fn from_parts(nodes: Vec<Node<T>>, edges: Vec<Edge>) -> Result<Self> {
        let mut labels = HashSet::new();
        for node in &nodes {
            if !labels.insert(node.label.as_str()) {
                return Err(Error::Structure(format!("duplicate element label `{}`", node.label)));
            }
        }
        let mut edge_labels = HashSet::new();
        for edge in &edges {
            if !edge_labels.insert(edge.label.as_str()) {
                return Err(Error::Structure(format!("duplicate edge label `{}`", edge.label)));
            }
        }

        let mut inputs: Vec<Vec<Option<EdgeId>>> = nodes.iter().map(|n| vec![None; n.element.input_ports()]).collect();
        let mut outputs: Vec<Vec<Option<EdgeId>>> =
            nodes.iter().map(|n| vec![None; n.element.output_ports()]).collect();

        for (id, edge) in edges.iter().enumerate() {
            for end in [edge.from, edge.to] {
                if end.node >= nodes.len() {
                    return Err(Error::Structure(format!(
                        "edge `{}` refers to missing node {}",
                        edge.label, end.node
                    )));
                }
            }
            let slot = outputs[edge.from.node].get_mut(edge.from.port).ok_or_else(|| {
                Error::Structure(format!(
                    "edge `{}` leaves {} `{}` through nonexistent output port {}",
                    edge.label,
                    nodes[edge.from.node].element.kind_name(),
                    nodes[edge.from.node].label,
                    edge.from.port
                ))
            })?;
            if slot.replace(id).is_some() {
                return Err(Error::Structure(format!(
                    "output port {} of `{}` is connected twice",
                    edge.from.port, nodes[edge.from.node].label
                )));
            }
            let slot = inputs[edge.to.node].get_mut(edge.to.port).ok_or_else(|| {
                Error::Structure(format!(
                    "edge `{}` enters {} `{}` through nonexistent input port {}",
                    edge.label,
                    nodes[edge.to.node].element.kind_name(),
                    nodes[edge.to.node].label,
                    edge.to.port
                ))
            })?;
            if slot.replace(id).is_some() {
                return Err(Error::Structure(format!(
                    "input port {} of `{}` is connected twice",
                    edge.to.port, nodes[edge.to.node].label
                )));
            }
        }

        let complete = |ports: Vec<Vec<Option<EdgeId>>>, dir: &str| -> Result<Vec<Vec<EdgeId>>> {
            ports
                .into_iter()
                .enumerate()
                .map(|(node, ports)| {
                    ports
                        .into_iter()
                        .enumerate()
                        .map(|(port, e)| {
                            e.ok_or_else(|| {
                                Error::Structure(format!("{dir} port {port} of `{}` is unconnected", nodes[node].label))
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let inputs = complete(inputs, "input")?;
        let outputs = complete(outputs, "output")?;

        // Kahn's algorithm; anything left over sits on a cycle.
        let mut indegree: Vec<usize> = inputs.iter().map(Vec::len).collect();
        let mut ready: VecDeque<NodeId> = (0..nodes.len()).filter(|&n| indegree[n] == 0).collect();
        let mut order = Vec::with_capacity(nodes.len());
        while let Some(n) = ready.pop_front() {
            order.push(n);
            for &e in &outputs[n] {
                let next = edges[e].to.node;
                indegree[next] -= 1;
                if indegree[next] == 0 {
                    ready.push_back(next);
                }
            }
        }
        if order.len() != nodes.len() {
            let stuck: Vec<&str> = (0..nodes.len())
                .filter(|&n| indegree[n] > 0)
                .map(|n| nodes[n].label.as_str())
                .collect();
            return Err(Error::Structure(format!(
                "network contains a cycle through {}",
                stuck.join(", ")
            )));
        }

        Ok(Self {
            nodes,
            edges,
            inputs,
            outputs,
            order,
        })
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &Node<T> {
        &self.nodes[id]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn topological_order(&self) -> &[NodeId] {
        &self.order
    }

    /// Edge entering `node` through `port`.
    pub fn input_edge(&self, node: NodeId, port: usize) -> EdgeId {
        self.inputs[node][port]
    }

    /// Edge leaving `node` through `port`.
    pub fn output_edge(&self, node: NodeId, port: usize) -> EdgeId {
        self.outputs[node][port]
    }

    pub fn node_by_label(&self, label: &str) -> Result<NodeId> {
        self.nodes
            .iter()
            .position(|n| n.label == label)
            .ok_or_else(|| Error::Lookup {
                kind: "element",
                label: label.to_owned(),
            })
    }

    pub fn edge_by_label(&self, label: &str) -> Result<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.label == label)
            .ok_or_else(|| Error::Lookup {
                kind: "edge",
                label: label.to_owned(),
            })
    }

    pub fn sources(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&n| matches!(self.nodes[n].element, Element::Source(_)))
    }

    /// Detectors in insertion order.
    pub fn detectors(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&n| matches!(self.nodes[n].element, Element::Detector))
    }

    pub fn detector_by_label(&self, label: &str) -> Result<NodeId> {
        self.detectors()
            .find(|&n| self.nodes[n].label == label)
            .ok_or_else(|| Error::Lookup {
                kind: "detector",
                label: label.to_owned(),
            })
    }

    /// The single [`SourceKind::Photon`] source.
    pub fn photon_source(&self) -> Result<NodeId> {
        let mut photons = self
            .sources()
            .filter(|&n| self.nodes[n].element == Element::Source(SourceKind::Photon));
        match (photons.next(), photons.next()) {
            (Some(n), None) => Ok(n),
            (None, _) => Err(Error::Structure("network has no photon source".into())),
            (Some(_), Some(_)) => Err(Error::Structure("network has more than one photon source".into())),
        }
    }

    /// Edges feeding detectors, in detector order.
    pub fn detector_edges(&self) -> Vec<EdgeId> {
        self.detectors().map(|n| self.inputs[n][0]).collect()
    }

    /// Edges leaving sources, in source order.
    pub fn source_edges(&self) -> Vec<EdgeId> {
        self.sources().map(|n| self.outputs[n][0]).collect()
    }

    /// The same network run backwards in time: detectors become sources (the
    /// one named `photon_detector` carries the photon), sources become
    /// detectors, and every edge is reversed port-for-port.
    ///
    /// Element transfer coefficients are kept as they are. The symmetric
    /// beamsplitter matrix is its own transpose, so adjoint (backward)
    /// amplitudes are the complex conjugates of forward amplitudes in the
    /// reversed network.
    pub fn reversed(&self, photon_detector: &str) -> Result<Self> {
        let chosen = self.detector_by_label(photon_detector)?;
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| Node {
                label: n.label.clone(),
                element: match &n.element {
                    Element::Source(_) => Element::Detector,
                    Element::Detector if id == chosen => Element::Source(SourceKind::Photon),
                    Element::Detector => Element::Source(SourceKind::Vacuum),
                    other => other.clone(),
                },
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                label: e.label.clone(),
                from: e.to,
                to: e.from,
            })
            .collect();
        Self::from_parts(nodes, edges)
    }

    /// Maps edge labels to ids.
    pub fn edge_ids(&self, labels: &[&str]) -> Result<Vec<EdgeId>> {
        let index: HashMap<&str, EdgeId> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.label.as_str(), i))
            .collect();
        labels
            .iter()
            .map(|l| {
                index.get(l).copied().ok_or_else(|| Error::Lookup {
                    kind: "edge",
                    label: (*l).to_owned(),
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(t: f64) -> BeamsplitterSpec<f64> {
        BeamsplitterSpec::new(t).unwrap()
    }

    #[test]
    fn rejects_unconnected_port() {
        let mut b = NetworkBuilder::<f64>::new();
        let s = b.photon("s");
        let bs = b.beamsplitter("bs", spec(0.5));
        let a = b.detector("A");
        let d = b.detector("B");
        b.connect("in", (s, 0), (bs, 0));
        b.connect("A", (bs, 0), (a, 0));
        b.connect("B", (bs, 1), (d, 0));
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::Structure(ref m) if m.contains("input port 1")));
    }

    #[test]
    fn rejects_cycle() {
        let mut b = NetworkBuilder::<f64>::new();
        let s = b.photon("s");
        let bs = b.beamsplitter("bs", spec(0.5));
        let p = b.phase_shifter("loop", 0.1);
        let a = b.detector("A");
        b.connect("in", (s, 0), (bs, 0));
        b.connect("out", (bs, 0), (a, 0));
        b.connect("back1", (bs, 1), (p, 0));
        b.connect("back2", (p, 0), (bs, 1));
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::Structure(ref m) if m.contains("cycle")));
    }

    #[test]
    fn rejects_double_connection_and_bad_port() {
        let mut b = NetworkBuilder::<f64>::new();
        let s = b.photon("s");
        let a = b.detector("A");
        b.connect("e1", (s, 0), (a, 0));
        b.connect("e2", (s, 0), (a, 0));
        assert!(b.build().is_err());

        let mut b = NetworkBuilder::<f64>::new();
        let s = b.photon("s");
        let a = b.detector("A");
        b.connect("e1", (s, 1), (a, 0));
        assert!(b.build().is_err());
    }

    #[test]
    fn rejects_duplicate_labels() {
        let mut b = NetworkBuilder::<f64>::new();
        let s = b.photon("x");
        let a = b.detector("x");
        b.connect("e", (s, 0), (a, 0));
        assert!(b.build().is_err());
    }

    #[test]
    fn photon_source_must_be_unique() {
        let mut b = NetworkBuilder::<f64>::new();
        let s1 = b.photon("s1");
        let s2 = b.photon("s2");
        let bs = b.beamsplitter("bs", spec(0.5));
        let a = b.detector("A");
        let d = b.detector("B");
        b.connect("i1", (s1, 0), (bs, 0));
        b.connect("i2", (s2, 0), (bs, 1));
        b.connect("A", (bs, 0), (a, 0));
        b.connect("B", (bs, 1), (d, 0));
        let net = b.build().unwrap();
        assert!(net.photon_source().is_err());
    }

    #[test]
    fn reversal_swaps_roles() {
        let net = crate::geometry::interferometer(spec(0.7)).unwrap();
        let rev = net.reversed("A").unwrap();
        let src = rev.photon_source().unwrap();
        assert_eq!(rev.node(src).label, "A");
        assert_eq!(rev.detectors().count(), 2);
        assert!(rev.reversed("nope").is_err());
        let x = rev.edge_by_label("X").unwrap();
        assert_eq!(rev.edge(x).from.node, net.edge(net.edge_by_label("X").unwrap()).to.node);
    }
}
