/** three.js scene wrapper: mesh display, instanced particle overlay, camera framing.
 *
 * Constructed without a canvas (tests), only the object graph exists; with a
 * canvas it also owns the renderer and the orbit controls. Camera interaction
 * is purely local and never triggers requests.
 */

import * as THREE from 'three';

import type {ParsedMesh} from './mesh_parse';

const MESH_COLOR = 0x8fa8c8;
const PARTICLE_COLOR = 0xd6703d;
const SPHERE_DETAIL = 1; // icosahedron subdivisions per instance

export class ViewerScene {
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  private renderer: THREE.WebGLRenderer | null = null;
  private controls: {update(): void; target: THREE.Vector3} | null = null;
  private meshObject: THREE.Object3D | null = null;
  private overlay: THREE.InstancedMesh | null = null;
  private overlayRadius = 1;

  constructor(canvas?: HTMLCanvasElement) {
    this.camera = new THREE.PerspectiveCamera(45, 1, 0.001, 100);
    this.camera.position.set(1.5, 1.2, 1.8);
    this.scene.background = new THREE.Color(0x11151a);
    const key = new THREE.DirectionalLight(0xffffff, 2.2);
    key.position.set(2, 3, 4);
    this.scene.add(key);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.55));
    if (canvas) {
      this.renderer = new THREE.WebGLRenderer({canvas, antialias: true});
      this.attachControls(canvas);
    }
  }

  private attachControls(canvas: HTMLCanvasElement): void {
    // deferred import keeps the module loadable without a DOM for the tests
    void import('three/examples/jsm/controls/OrbitControls.js').then(({OrbitControls}) => {
      const controls = new OrbitControls(this.camera, canvas);
      controls.enableDamping = true;
      this.controls = controls;
    });
  }

  setMesh(parsed: ParsedMesh): void {
    if (this.meshObject) this.scene.remove(this.meshObject);
    const geometry = new THREE.BufferGeometry();
    geometry.setAttribute('position', new THREE.BufferAttribute(parsed.positions, 3));
    geometry.setIndex(new THREE.BufferAttribute(parsed.indices, 1));
    geometry.computeVertexNormals();
    geometry.computeBoundingBox();
    const material = new THREE.MeshStandardMaterial({
      color: MESH_COLOR,
      flatShading: true,
      transparent: true,
      opacity: 0.45,
      side: THREE.DoubleSide,
    });
    const solid = new THREE.Mesh(geometry, material);
    const wire = new THREE.LineSegments(
      new THREE.WireframeGeometry(geometry),
      new THREE.LineBasicMaterial({color: 0x3d4c5f, transparent: true, opacity: 0.35}),
    );
    const group = new THREE.Group();
    group.add(solid);
    group.add(wire);
    this.meshObject = group;
    this.scene.add(group);
    const box = geometry.boundingBox;
    if (box) this.frameToBox(box.min, box.max);
  }

  clearParticles(): void {
    if (this.overlay) {
      this.scene.remove(this.overlay);
      this.overlay.geometry.dispose();
      this.overlay = null;
    }
  }

  /** Replaces (never accumulates) the particle overlay. */
  setParticles(positions: number[][], displayRadius: number): void {
    this.clearParticles();
    const geometry = new THREE.IcosahedronGeometry(1, SPHERE_DETAIL);
    const material = new THREE.MeshStandardMaterial({color: PARTICLE_COLOR, flatShading: true});
    const instanced = new THREE.InstancedMesh(geometry, material, positions.length);
    const matrix = new THREE.Matrix4();
    for (let i = 0; i < positions.length; i++) {
      const [x, y, z] = positions[i];
      matrix.makeScale(displayRadius, displayRadius, displayRadius);
      matrix.setPosition(x, y, z);
      instanced.setMatrixAt(i, matrix);
    }
    instanced.instanceMatrix.needsUpdate = true;
    this.overlay = instanced;
    this.overlayRadius = displayRadius;
    this.scene.add(instanced);
  }

  /** Rendering-only rescale of the existing overlay. */
  setDisplayRadius(displayRadius: number): void {
    if (!this.overlay || displayRadius === this.overlayRadius) return;
    const matrix = new THREE.Matrix4();
    const position = new THREE.Vector3();
    for (let i = 0; i < this.overlay.count; i++) {
      this.overlay.getMatrixAt(i, matrix);
      position.setFromMatrixPosition(matrix);
      matrix.makeScale(displayRadius, displayRadius, displayRadius);
      matrix.setPosition(position.x, position.y, position.z);
      this.overlay.setMatrixAt(i, matrix);
    }
    this.overlay.instanceMatrix.needsUpdate = true;
    this.overlayRadius = displayRadius;
  }

  particleCount(): number {
    return this.overlay ? this.overlay.count : 0;
  }

  overlayCountInScene(): number {
    let count = 0;
    this.scene.traverse((obj) => {
      if ((obj as THREE.InstancedMesh).isInstancedMesh) count++;
    });
    return count;
  }

  /** Positions the camera so the whole box is in view. */
  frameToBox(min: THREE.Vector3 | number[], max: THREE.Vector3 | number[]): void {
    const lo = Array.isArray(min) ? new THREE.Vector3(...min) : min;
    const hi = Array.isArray(max) ? new THREE.Vector3(...max) : max;
    const center = lo.clone().add(hi).multiplyScalar(0.5);
    const diagonal = hi.clone().sub(lo).length();
    const distance = Math.max(diagonal, 1e-6) * 1.6;
    this.camera.position.copy(center).add(new THREE.Vector3(0.7, 0.55, 1).normalize().multiplyScalar(distance));
    this.camera.near = distance / 1000;
    this.camera.far = distance * 50;
    this.camera.lookAt(center);
    this.camera.updateProjectionMatrix();
    if (this.controls) this.controls.target.copy(center);
  }

  resize(width: number, height: number): void {
    this.camera.aspect = width / Math.max(1, height);
    this.camera.updateProjectionMatrix();
    this.renderer?.setSize(width, height, false);
  }

  renderLoop(): void {
    if (!this.renderer) return;
    const tick = () => {
      requestAnimationFrame(tick);
      this.controls?.update();
      this.renderer!.render(this.scene, this.camera);
    };
    tick();
  }
}
