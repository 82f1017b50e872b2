//! Inter-tile control network.
//!
//! The tiles of one coated wall form an object. The tile with the smallest id
//! is its representative and talks to the controller; the others are reached
//! over a BFS spanning tree of the tile links. A SET frame floods down the
//! tree, every tile applies its own command once, and ACKs are aggregated back
//! up so the representative answers with a single ACK.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::controller::{Assignment, TileCommand};
use crate::error::TilenetError;
use crate::geometry::{Floorplan, TileId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FrameKind {
    Set,
    Ack,
}

/// Addressee of a frame: one tile or every tile of the object (`"*"`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Tile(TileId),
    All,
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Tile(t) => s.serialize_u32(*t),
            Self::All => s.serialize_str("*"),
        }
    }
}

impl<'de> Deserialize<'de> for Target {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Tile(TileId),
            Star(String),
        }
        match Raw::deserialize(d)? {
            Raw::Tile(t) => Ok(Self::Tile(t)),
            Raw::Star(s) if s == "*" => Ok(Self::All),
            Raw::Star(s) => Err(serde::de::Error::custom(format!("bad target {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Commands(Vec<TileCommand>),
    Acked { acked: Vec<TileId> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    #[serde(rename = "type")]
    pub kind: FrameKind,
    pub seq: u64,
    /// Sender tile.
    pub origin: TileId,
    pub target: Target,
    pub payload: Payload,
}

impl Frame {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("frames always serialize")
    }
}

/// A frame in flight. `to == None` means the controller.
#[derive(Clone, Debug, PartialEq)]
pub struct Outbound {
    pub to: Option<TileId>,
    pub frame: Frame,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TileNode {
    pub id: TileId,
    pub parent: Option<TileId>,
    pub children: Vec<TileId>,
    pub last_seq: u64,
    pub state: Option<Assignment>,
    /// Sequence numbers of every command applied, in order.
    pub applied: Vec<u64>,
    // seq -> (children still to report, tiles acked so far)
    pending: BTreeMap<u64, (BTreeSet<TileId>, Vec<TileId>)>,
}

impl TileNode {
    fn new(id: TileId) -> Self {
        Self { id, parent: None, children: Vec::new(), last_seq: 0, state: None, applied: Vec::new(), pending: BTreeMap::new() }
    }

    fn ack(&self, seq: u64, acked: Vec<TileId>) -> Outbound {
        Outbound {
            to: self.parent,
            frame: Frame {
                kind: FrameKind::Ack,
                seq,
                origin: self.id,
                target: self.parent.map_or(Target::All, Target::Tile),
                payload: Payload::Acked { acked },
            },
        }
    }

    /// Process one received frame and return what the tile sends in reply.
    /// SET frames not newer than the last one seen are dropped.
    pub fn apply_frame(&mut self, frame: &Frame) -> Vec<Outbound> {
        match frame.kind {
            FrameKind::Set => {
                if frame.seq <= self.last_seq {
                    return Vec::new();
                }
                self.last_seq = frame.seq;
                let addressed = matches!(frame.target, Target::All) || frame.target == Target::Tile(self.id);
                let mut acked = Vec::new();
                if let (true, Payload::Commands(cmds)) = (addressed, &frame.payload) {
                    if let Some(cmd) = cmds.iter().find(|c| c.tile_id == self.id) {
                        self.state = Some(Assignment { function: cmd.function.clone(), config: cmd.config.clone() });
                        self.applied.push(cmd.seq);
                        acked.push(self.id);
                    }
                }
                if self.children.is_empty() {
                    return vec![self.ack(frame.seq, acked)];
                }
                self.pending.insert(frame.seq, (self.children.iter().copied().collect(), acked));
                self.children
                    .iter()
                    .map(|&c| Outbound { to: Some(c), frame: Frame { origin: self.id, ..frame.clone() } })
                    .collect()
            }
            FrameKind::Ack => {
                let Some((waiting, acked)) = self.pending.get_mut(&frame.seq) else { return Vec::new() };
                if !waiting.remove(&frame.origin) {
                    return Vec::new();
                }
                if let Payload::Acked { acked: more } = &frame.payload {
                    acked.extend(more);
                }
                if !waiting.is_empty() {
                    return Vec::new();
                }
                let (_, mut acked) = self.pending.remove(&frame.seq).expect("entry present");
                acked.sort_unstable();
                vec![self.ack(frame.seq, acked)]
            }
        }
    }
}

/// Outcome of pushing one SET through an object.
#[derive(Clone, Debug, PartialEq)]
pub struct Delivery {
    /// Synchronous tile-to-tile rounds until the representative had every ACK.
    pub rounds: usize,
    /// Round in which each tile first received the SET.
    pub hops: BTreeMap<TileId, usize>,
    /// The representative's final ACK, if the broadcast completed.
    pub ack: Option<Frame>,
    /// Every frame exchanged, in delivery order, starting with the injected
    /// SET.
    pub trace: Vec<Frame>,
}

/// The tiles of one object and their spanning tree.
#[derive(Clone, Debug, PartialEq)]
pub struct TileNetwork {
    pub representative: TileId,
    pub nodes: BTreeMap<TileId, TileNode>,
    /// BFS hop count from the representative.
    pub depth: BTreeMap<TileId, usize>,
}

impl TileNetwork {
    /// Build the BFS tree over `tiles` using the undirected `links` (links
    /// touching other tiles are ignored). Children are ordered by id.
    pub fn new(tiles: &[TileId], links: &[(TileId, TileId)]) -> Result<Self, TilenetError> {
        let members: BTreeSet<TileId> = tiles.iter().copied().collect();
        let representative = *members.first().ok_or(TilenetError::EmptyObject)?;
        let mut adj: BTreeMap<TileId, BTreeSet<TileId>> = members.iter().map(|&t| (t, BTreeSet::new())).collect();
        for &(a, b) in links {
            if a != b && members.contains(&a) && members.contains(&b) {
                adj.get_mut(&a).expect("member").insert(b);
                adj.get_mut(&b).expect("member").insert(a);
            }
        }

        let mut nodes: BTreeMap<TileId, TileNode> = members.iter().map(|&t| (t, TileNode::new(t))).collect();
        let mut depth = BTreeMap::from([(representative, 0)]);
        let mut queue = VecDeque::from([representative]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[&u] {
                if depth.contains_key(&v) {
                    continue;
                }
                depth.insert(v, depth[&u] + 1);
                nodes.get_mut(&v).expect("member").parent = Some(u);
                nodes.get_mut(&u).expect("member").children.push(v);
                queue.push_back(v);
            }
        }
        if let Some(&lost) = members.iter().find(|t| !depth.contains_key(t)) {
            return Err(TilenetError::Partition(lost));
        }
        Ok(Self { representative, nodes, depth })
    }

    /// Largest hop count from the representative.
    pub fn eccentricity(&self) -> usize {
        self.depth.values().copied().max().unwrap_or(0)
    }

    /// Inject a frame at the representative and run synchronous rounds until
    /// no tile-to-tile frame is in flight.
    pub fn deliver(&mut self, frame: Frame) -> Delivery {
        let mut trace = vec![frame.clone()];
        let rep = self.representative;
        let mut in_flight: Vec<Outbound> = self.nodes.get_mut(&rep).expect("representative").apply_frame(&frame);
        let mut rounds = 0;
        let mut ack = None;
        let mut hops = BTreeMap::from([(rep, 0)]);
        loop {
            let (to_ctl, to_tiles): (Vec<_>, Vec<_>) = in_flight.into_iter().partition(|o| o.to.is_none());
            for o in to_ctl {
                trace.push(o.frame.clone());
                ack = Some(o.frame);
            }
            if to_tiles.is_empty() {
                break;
            }
            rounds += 1;
            let mut next = Vec::new();
            for o in to_tiles {
                trace.push(o.frame.clone());
                if o.frame.kind == FrameKind::Set {
                    hops.entry(o.to.expect("tile-bound")).or_insert(rounds);
                }
                let node = self.nodes.get_mut(&o.to.expect("tile-bound")).expect("known tile");
                next.extend(node.apply_frame(&o.frame));
            }
            in_flight = next;
        }
        Delivery { rounds, hops, ack, trace }
    }

    /// Broadcast the commands meant for this object's tiles under one SET.
    pub fn broadcast(&mut self, seq: u64, commands: Vec<TileCommand>) -> Delivery {
        let commands: Vec<TileCommand> = commands.into_iter().filter(|c| self.nodes.contains_key(&c.tile_id)).collect();
        self.deliver(Frame {
            kind: FrameKind::Set,
            seq,
            origin: self.representative,
            target: Target::All,
            payload: Payload::Commands(commands),
        })
    }
}

/// One network per coated wall. Without explicit links, each tile is linked
/// to its neighbours along the wall.
pub fn build_networks(plan: &Floorplan, links: Option<&[(TileId, TileId)]>) -> Result<Vec<TileNetwork>, TilenetError> {
    plan.walls()
        .iter()
        .filter(|w| w.coated)
        .map(|w| {
            let ids: Vec<TileId> = plan.tiles_of_wall(w.id).iter().map(|t| t.id).collect();
            let chain: Vec<(TileId, TileId)>;
            let links = match links {
                Some(l) => l,
                None => {
                    chain = ids.windows(2).map(|p| (p[0], p[1])).collect();
                    &chain
                }
            };
            TileNetwork::new(&ids, links)
        })
        .collect()
}
