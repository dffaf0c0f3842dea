// Regenerates tests/data/layout/oracle.json from the reference compiler.
//
//   npm install solc@0.5.16
//   NODE_PATH=$(npm root) node scripts/gen_layout_oracle.js
//
// Output: { "<file>": { "<contract>": [ {name, slot, offset, type}, ... ] } }
'use strict';

const fs = require('fs');
const path = require('path');
const solc = require('solc');

const dir = path.join(__dirname, '..', 'tests', 'data', 'layout');
const files = fs.readdirSync(dir).filter((f) => f.endsWith('.sol')).sort();

const sources = {};
for (const f of files) sources[f] = { content: fs.readFileSync(path.join(dir, f), 'utf8') };

const input = {
  language: 'Solidity',
  sources,
  settings: { outputSelection: { '*': { '*': ['storageLayout'] } } },
};
const output = JSON.parse(solc.compile(JSON.stringify(input)));
const errors = (output.errors || []).filter((e) => e.severity === 'error');
if (errors.length) {
  for (const e of errors) console.error(e.formattedMessage);
  process.exit(1);
}

const oracle = { compiler: solc.version() };
for (const f of files) {
  oracle[f] = {};
  for (const [name, c] of Object.entries(output.contracts[f] || {})) {
    if (!c.storageLayout) continue;
    oracle[f][name] = c.storageLayout.storage.map((s) => ({
      name: s.label,
      slot: Number(s.slot),
      offset: s.offset,
      type: c.storageLayout.types[s.type].label,
    }));
  }
}
fs.writeFileSync(path.join(dir, 'oracle.json'), JSON.stringify(oracle, null, 2) + '\n');
console.log(`wrote ${files.length} files`);
