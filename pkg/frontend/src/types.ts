// Wire types for the game server JSON API (schema version 1).

export type SideName = 'E' | 'U';

export interface ComponentDoc {
  id: string;
  leftChain: number;
  rightChain: number;
  named: Record<string, string>;
  leftChainNodes: string[];
  rightChainNodes: string[];
}

export interface FamilyDoc {
  components: ComponentDoc[];
  finalNode: string;
}

export interface PhaseDoc {
  kind: string;
  side?: SideName;
  l?: number;
  m?: number;
}

export interface ElementPairDoc {
  round: number;
  E: string;
  U: string;
}

export interface SetPairDoc {
  index: number;
  E: string[];
  U: string[];
}

export interface VerdictDoc {
  set_membership: boolean;
  equalities: boolean;
  relations: boolean;
  duplicator_wins: boolean;
}

export interface PositionDoc {
  v: number;
  sessionId: string;
  roundsLeft: number;
  toAct: 'spoiler' | 'duplicator';
  phase: PhaseDoc;
  families: { E: FamilyDoc; U: FamilyDoc };
  elements: ElementPairDoc[];
  sets: SetPairDoc[];
  config: { k: number; sizes: number[]; multiplicity: number; rounds: number };
  verdict?: VerdictDoc;
  duplicatorReplies?: ReplyDoc[];
}

export interface ReplyDoc {
  kind: string;
  E?: string | string[];
  U?: string | string[];
  m?: number;
}

export interface ChainsDoc {
  v: number;
  k: number;
  maxlen: number;
  attached: boolean;
  lengths: number[];
}

export type MoveRequest =
  | { type: 'element'; side: SideName; node: string }
  | { type: 'set'; side: SideName; nodes: string[] }
  | { type: 'bound'; side: SideName; l: number }
  | { type: 'bounded-set'; nodes: string[] };

export interface NewGameRequest {
  k: number;
  sizes: number[];
  multiplicity: number;
  rounds?: number;
}
